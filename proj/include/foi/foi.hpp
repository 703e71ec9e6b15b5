#pragma once

#include "foi/classifier.hpp"
#include "foi/factor_analysis.hpp"
#include "foi/indicator_store.hpp"
#include "foi/pillar_index.hpp"
#include "foi/pipeline.hpp"
#include "foi/reference_fixture.hpp"
#include "foi/report.hpp"
#include "foi/rescaling.hpp"
