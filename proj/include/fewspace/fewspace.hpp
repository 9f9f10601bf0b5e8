// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fewspace/basis.hpp"
#include "fewspace/density.hpp"
#include "fewspace/domain.hpp"
#include "fewspace/error.hpp"
#include "fewspace/kernel.hpp"
#include "fewspace/montecarlo.hpp"
#include "fewspace/polytope.hpp"
#include "fewspace/quadrature.hpp"
#include "fewspace/random.hpp"
#include "fewspace/space.hpp"
#include "fewspace/theorem.hpp"
