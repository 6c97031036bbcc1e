// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header.
#pragma once

#include "eulerlab/bounds.hpp"
#include "eulerlab/core.hpp"
#include "eulerlab/csv.hpp"
#include "eulerlab/error_curve.hpp"
#include "eulerlab/euler.hpp"
#include "eulerlab/experiment.hpp"
#include "eulerlab/lemmas.hpp"
#include "eulerlab/models.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/probes.hpp"
#include "eulerlab/quadrature.hpp"
#include "eulerlab/random.hpp"
#include "eulerlab/svg.hpp"
