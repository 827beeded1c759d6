#pragma once

#include <json.hpp>

#include "ivr/metrics.hpp"

namespace ivr::detail {

using ojson = nlohmann::ordered_json;

ojson to_ojson(const EditCounts& counts);
ojson to_ojson(const CorpusWer& wer);
ojson to_ojson(const EvalReport& report);

}  // namespace ivr::detail
