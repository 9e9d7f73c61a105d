#pragma once

#include "acf/constructor.hpp"
#include "acf/decider.hpp"
#include "acf/digest.hpp"
#include "acf/error.hpp"
#include "acf/homog_poly.hpp"
#include "acf/ideal.hpp"
#include "acf/json_io.hpp"
#include "acf/linalg.hpp"
#include "acf/monomial.hpp"
#include "acf/pipeline.hpp"
#include "acf/random.hpp"
#include "acf/rational.hpp"
#include "acf/trunc_series.hpp"
