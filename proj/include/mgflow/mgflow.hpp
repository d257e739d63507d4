#pragma once

#include "csv.hpp"
#include "eos.hpp"
#include "errors.hpp"
#include "flow1d.hpp"
#include "problem_json.hpp"
#include "problems.hpp"
#include "riemann.hpp"
