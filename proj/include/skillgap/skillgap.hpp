#pragma once

#include "skillgap/config.hpp"
#include "skillgap/corpus.hpp"
#include "skillgap/error.hpp"
#include "skillgap/fuzzy_match.hpp"
#include "skillgap/gap_analysis.hpp"
#include "skillgap/html.hpp"
#include "skillgap/module_trends.hpp"
#include "skillgap/report.hpp"
#include "skillgap/stat_tests.hpp"
#include "skillgap/taxonomy.hpp"
#include "skillgap/text_normalize.hpp"
