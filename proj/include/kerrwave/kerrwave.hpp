// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "kerrwave/assembly.hpp"
#include "kerrwave/config.hpp"
#include "kerrwave/diagnostics.hpp"
#include "kerrwave/errors.hpp"
#include "kerrwave/fe_space.hpp"
#include "kerrwave/linalg.hpp"
#include "kerrwave/material.hpp"
#include "kerrwave/oracle_rk.hpp"
#include "kerrwave/parallel.hpp"
#include "kerrwave/quadrature.hpp"
#include "kerrwave/runner.hpp"
#include "kerrwave/solver_ea.hpp"
#include "kerrwave/solver_eh.hpp"
#include "kerrwave/time_basis.hpp"
#include "kerrwave/trajectory.hpp"
