#pragma once

#include "hyperfuzz/certificate.hpp"
#include "hyperfuzz/common.hpp"
#include "hyperfuzz/document.hpp"
#include "hyperfuzz/family.hpp"
#include "hyperfuzz/fuzzy_metrics.hpp"
#include "hyperfuzz/fuzzy_set.hpp"
#include "hyperfuzz/generators.hpp"
#include "hyperfuzz/hausdorff.hpp"
#include "hyperfuzz/reports.hpp"
#include "hyperfuzz/space.hpp"
