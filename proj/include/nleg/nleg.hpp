#pragma once

// Umbrella header for the n-leg field theory verification library.

#include "nleg/errors.hpp"
#include "nleg/tensor.hpp"
#include "nleg/rng.hpp"
#include "nleg/fd.hpp"
#include "nleg/lie_algebra.hpp"
#include "nleg/frame_field.hpp"
#include "nleg/teleparallel.hpp"
#include "nleg/lagrangian.hpp"
#include "nleg/variation.hpp"
#include "nleg/riemann.hpp"
#include "nleg/vacuum_suite.hpp"
