#pragma once

#include "qseries/rational.hpp"
#include "qseries/laurent_series.hpp"
#include "qseries/theta.hpp"
#include "qseries/cfrac.hpp"
#include "qseries/identities.hpp"
#include "qseries/partitions.hpp"
#include "qseries/dissection.hpp"
#include "qseries/dsl/lexer.hpp"
#include "qseries/dsl/ast.hpp"
#include "qseries/dsl/parser.hpp"
#include "qseries/dsl/render.hpp"
#include "qseries/dsl/evaluate.hpp"
