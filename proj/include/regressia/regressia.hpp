#pragma once

#include "regressia/error.hpp"
#include "regressia/tuple.hpp"
#include "regressia/combinatorics.hpp"
#include "regressia/order_type.hpp"
#include "regressia/regressive.hpp"
#include "regressia/closure.hpp"
#include "regressia/ramsey.hpp"
#include "regressia/orders.hpp"
#include "regressia/assignment.hpp"
#include "regressia/decreasing.hpp"
#include "regressia/lift.hpp"
#include "regressia/verify.hpp"
#include "regressia/search.hpp"
#include "regressia/gadgets.hpp"
#include "regressia/threshold.hpp"
#include "regressia/order_iso.hpp"
#include "regressia/completions.hpp"
#include "regressia/bef.hpp"
#include "regressia/dfnl.hpp"
#include "regressia/systems.hpp"
#include "regressia/serialize.hpp"
