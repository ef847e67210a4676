#pragma once

// Umbrella header for the axired toolkit.

#include "axired/acceptance.hpp"
#include "axired/catalog.hpp"
#include "axired/chart.hpp"
#include "axired/diff.hpp"
#include "axired/energetics.hpp"
#include "axired/equivariant.hpp"
#include "axired/eval.hpp"
#include "axired/expr.hpp"
#include "axired/geometry.hpp"
#include "axired/metric.hpp"
#include "axired/parse.hpp"
#include "axired/print.hpp"
#include "axired/quadrature.hpp"
#include "axired/rational.hpp"
#include "axired/reduction.hpp"
#include "axired/simplify.hpp"
#include "axired/zero.hpp"
