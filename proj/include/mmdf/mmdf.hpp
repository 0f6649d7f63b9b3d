#pragma once

#include "mmdf/config.hpp"
#include "mmdf/datasets.hpp"
#include "mmdf/dfsp.hpp"
#include "mmdf/error.hpp"
#include "mmdf/experiment.hpp"
#include "mmdf/generator.hpp"
#include "mmdf/graph.hpp"
#include "mmdf/membership.hpp"
#include "mmdf/metrics.hpp"
#include "mmdf/modularity.hpp"
#include "mmdf/report.hpp"
#include "mmdf/rng.hpp"
#include "mmdf/spectral.hpp"
