/**
 * @file schur.hpp
 * @brief Umbrella header for the whole library.
 */
#pragma once

#include "schur/group.hpp"
#include "schur/roots.hpp"
#include "schur/smith.hpp"
#include "schur/cocycle.hpp"
#include "schur/table_io.hpp"
#include "schur/fixtures.hpp"
#include "schur/p1_equivariant.hpp"
#include "schur/curve.hpp"
#include "schur/scenario.hpp"
#include "schur/surface.hpp"
#include "schur/report.hpp"
