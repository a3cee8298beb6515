#pragma once

#include "errors.hpp"
#include "rational.hpp"
#include "value.hpp"
#include "poly.hpp"
#include "poly_parse.hpp"
#include "ffield.hpp"
#include "valuation.hpp"
#include "compress.hpp"
#include "keypoly.hpp"
#include "limitfam.hpp"
#include "chain.hpp"
#include "extend.hpp"
