#ifndef POLYCHAIN_POLYCHAIN_HPP
#define POLYCHAIN_POLYCHAIN_HPP

#include "polychain/geometry.hpp"
#include "polychain/chain.hpp"
#include "polychain/sampling.hpp"
#include "polychain/verify.hpp"
#include "polychain/experiment.hpp"
#include "polychain/polynomial.hpp"
#include "polychain/circle.hpp"
#include "polychain/lp.hpp"
#include "polychain/gram.hpp"
#include "polychain/io.hpp"

#endif  // POLYCHAIN_POLYCHAIN_HPP
