#pragma once

#include "qblend/assembly.hpp"
#include "qblend/blends.hpp"
#include "qblend/dispersion.hpp"
#include "qblend/eigensolve.hpp"
#include "qblend/errors.hpp"
#include "qblend/estimator.hpp"
#include "qblend/harness.hpp"
#include "qblend/polynomial.hpp"
#include "qblend/quadrature.hpp"
#include "qblend/rational.hpp"
#include "qblend/series.hpp"
#include "qblend/splines.hpp"
