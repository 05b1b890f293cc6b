// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dominance/bootstrap.hpp"
#include "dominance/cli.hpp"
#include "dominance/empirical.hpp"
#include "dominance/errors.hpp"
#include "dominance/indices.hpp"
#include "dominance/inference.hpp"
#include "dominance/io.hpp"
#include "dominance/models.hpp"
#include "dominance/normal.hpp"
#include "dominance/parallel.hpp"
#include "dominance/random.hpp"
#include "dominance/report.hpp"
#include "dominance/simulation.hpp"
