#pragma once

// Umbrella header.

#include "asymptotics.hpp"
#include "climits.hpp"
#include "core.hpp"
#include "expansion.hpp"
#include "highprec.hpp"
#include "integrals.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
#include "seqfun.hpp"
#include "tail_fit.hpp"
#include "zeta.hpp"
