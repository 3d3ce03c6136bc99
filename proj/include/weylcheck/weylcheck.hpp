#pragma once

#include "weylcheck/core.hpp"
#include "weylcheck/report.hpp"
#include "weylcheck/characters.hpp"
#include "weylcheck/expsums.hpp"
#include "weylcheck/modforms.hpp"
#include "weylcheck/special.hpp"
#include "weylcheck/oscint.hpp"
#include "weylcheck/trace.hpp"
#include "weylcheck/lfunc.hpp"
#include "weylcheck/pipeline.hpp"
#include "weylcheck/suites.hpp"
#include "weylcheck/cli.hpp"
