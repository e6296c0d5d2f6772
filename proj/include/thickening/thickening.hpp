#pragma once

#include "thickening/errors.hpp"
#include "thickening/filtration.hpp"
#include "thickening/io.hpp"
#include "thickening/linear_program.hpp"
#include "thickening/measure.hpp"
#include "thickening/metric.hpp"
#include "thickening/oracles.hpp"
#include "thickening/persistence.hpp"
#include "thickening/pvalue.hpp"
#include "thickening/transport.hpp"
