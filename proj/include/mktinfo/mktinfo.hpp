#pragma once

#include "mktinfo/entropy.hpp"
#include "mktinfo/errors.hpp"
#include "mktinfo/fractional_theory.hpp"
#include "mktinfo/gamma.hpp"
#include "mktinfo/random.hpp"
#include "mktinfo/report.hpp"
#include "mktinfo/scaling.hpp"
#include "mktinfo/series.hpp"
#include "mktinfo/simulators.hpp"
