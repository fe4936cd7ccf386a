#pragma once

#include "asymptotics.hpp"
#include "errors.hpp"
#include "log_value.hpp"
#include "mom.hpp"
#include "sampling.hpp"
#include "specfun.hpp"
#include "symbol.hpp"
#include "th_determinant.hpp"
