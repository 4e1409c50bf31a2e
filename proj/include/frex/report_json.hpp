#pragma once

#include <nlohmann/json.hpp>

#include "frex/human_eval.hpp"
#include "frex/metrics.hpp"
#include "frex/stats.hpp"
#include "frex/transfer.hpp"

namespace frex {

using Json = nlohmann::ordered_json;

Json to_json(const MetricReport& report);
Json to_json(const FoldSummary& summary);
Json to_json(const TransferReport& report);
Json to_json(const CorpusStats& stats);
Json to_json(const EvalSummary& summary);
Json to_json(const HumanEvalResult& result);

}  // namespace frex
