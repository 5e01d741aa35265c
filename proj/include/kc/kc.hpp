#pragma once

#include "kc/error.hpp"
#include "kc/text.hpp"
#include "kc/csv.hpp"
#include "kc/record.hpp"
#include "kc/graph.hpp"
#include "kc/parallel.hpp"
#include "kc/centrality.hpp"
#include "kc/coupling.hpp"
#include "kc/coword.hpp"
#include "kc/community.hpp"
#include "kc/report.hpp"
#include "kc/pipeline.hpp"
