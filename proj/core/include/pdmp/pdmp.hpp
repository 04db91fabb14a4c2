#pragma once

#include "pdmp/basis.hpp"
#include "pdmp/bench.hpp"
#include "pdmp/chain_io.hpp"
#include "pdmp/density.hpp"
#include "pdmp/error.hpp"
#include "pdmp/jumprate.hpp"
#include "pdmp/model.hpp"
#include "pdmp/quadrature.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/simulate.hpp"
