#pragma once

#include "nashfund/axioms.hpp"
#include "nashfund/decomposition.hpp"
#include "nashfund/error.hpp"
#include "nashfund/fixtures.hpp"
#include "nashfund/generate.hpp"
#include "nashfund/json_io.hpp"
#include "nashfund/maxflow.hpp"
#include "nashfund/mechanisms.hpp"
#include "nashfund/model.hpp"
#include "nashfund/rational.hpp"
#include "nashfund/reference_examples.hpp"
#include "nashfund/simplex.hpp"
#include "nashfund/solver.hpp"
