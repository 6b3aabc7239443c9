#pragma once

#include "core.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "manipulation.hpp"
#include "pav_solver.hpp"
#include "reductions.hpp"
#include "rules.hpp"
#include "score.hpp"
