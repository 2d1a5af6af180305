#pragma once

#include "spheremean/bessel.hpp"
#include "spheremean/errors.hpp"
#include "spheremean/fft.hpp"
#include "spheremean/field.hpp"
#include "spheremean/field_io.hpp"
#include "spheremean/format.hpp"
#include "spheremean/operator.hpp"
#include "spheremean/quadrature.hpp"
#include "spheremean/random_field.hpp"
#include "spheremean/solver.hpp"
#include "spheremean/symbol.hpp"
