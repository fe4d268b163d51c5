#pragma once

#include "lapval/errors.hpp"
#include "lapval/geom.hpp"
#include "lapval/laplace.hpp"
#include "lapval/dissect.hpp"
#include "lapval/valuation.hpp"
#include "lapval/functrans.hpp"
#include "lapval/oracle.hpp"
#include "lapval/random.hpp"
#include "lapval/io.hpp"
#include "lapval/suites.hpp"
