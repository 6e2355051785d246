#pragma once

#include "survival/bond.hpp"
#include "survival/curves.hpp"
#include "survival/errors.hpp"
#include "survival/integrals.hpp"
#include "survival/portfolio.hpp"
#include "survival/pricer.hpp"
#include "survival/risk.hpp"
#include "survival/solver.hpp"
