#pragma once

#include "chronoscale/analyzer.hpp"
#include "chronoscale/coeffs.hpp"
#include "chronoscale/conditions.hpp"
#include "chronoscale/config.hpp"
#include "chronoscale/errors.hpp"
#include "chronoscale/format.hpp"
#include "chronoscale/network.hpp"
#include "chronoscale/reference.hpp"
#include "chronoscale/simulator.hpp"
#include "chronoscale/timescale.hpp"
