#pragma once

#include "acforge/analysis.hpp"
#include "acforge/compile.hpp"
#include "acforge/core.hpp"
#include "acforge/error.hpp"
#include "acforge/evaluate.hpp"
#include "acforge/io.hpp"
#include "acforge/limits.hpp"
#include "acforge/nnf.hpp"
#include "acforge/oracle.hpp"
#include "acforge/query.hpp"
#include "acforge/rational.hpp"
#include "acforge/reduction.hpp"
#include "acforge/transform.hpp"
