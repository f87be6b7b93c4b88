// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "core.hpp"
#include "csv.hpp"
#include "mbd.hpp"
#include "cf.hpp"
#include "moments.hpp"
#include "rng.hpp"
#include "parallel.hpp"
#include "stats.hpp"
#include "density.hpp"
#include "simulate.hpp"
#include "pde.hpp"
#include "peaks.hpp"
#include "scan.hpp"
#include "params_io.hpp"
