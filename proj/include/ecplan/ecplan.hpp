#pragma once

// Convenience umbrella for the whole library.

#include "ecplan/matrix.hpp"
#include "ecplan/tariffs.hpp"
#include "ecplan/core.hpp"
#include "ecplan/allocation.hpp"
#include "ecplan/simplex.hpp"
#include "ecplan/dispatch.hpp"
#include "ecplan/sizing.hpp"
#include "ecplan/indicators.hpp"
#include "ecplan/compliance.hpp"
#include "ecplan/investment.hpp"
