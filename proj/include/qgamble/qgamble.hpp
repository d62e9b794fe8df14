#pragma once

#include "analytics.hpp"
#include "engine.hpp"
#include "montecarlo.hpp"
#include "protocol.hpp"
#include "qubit.hpp"
#include "records.hpp"
#include "strategies.hpp"
#include "strategy_spec.hpp"
#include "two_qubit.hpp"
#include "verify.hpp"
