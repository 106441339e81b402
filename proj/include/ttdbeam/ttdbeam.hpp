#pragma once

#include "ttdbeam/error.hpp"
#include "ttdbeam/core.hpp"
#include "ttdbeam/splitbeam.hpp"
#include "ttdbeam/solvers.hpp"
#include "ttdbeam/generators.hpp"
#include "ttdbeam/dictionary.hpp"
#include "ttdbeam/hdb.hpp"
#include "ttdbeam/eval.hpp"
#include "ttdbeam/io.hpp"
#include "ttdbeam/render.hpp"
