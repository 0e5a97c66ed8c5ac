#pragma once

#include <string>

#include <json.hpp>

#include "gwb/gaussian.hpp"
#include "gwb/posterior.hpp"
#include "gwb/stats.hpp"
#include "gwb/views.hpp"

namespace gwb {

using Json = nlohmann::json;

// Canonical serialization: object keys sorted, floats printed with "%.17g" so
// equal inputs produce byte-identical files. Rejects NaN / infinity.
std::string canonical_dump(const Json& j, int indent = 0);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& field);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& field);

// {"mean": [...], "cov": [[...]]}
Json gaussian_to_json(const GaussianMeasure& g);
GaussianMeasure gaussian_from_json(const Json& j);

// {"mu": [...], "cov": [[...]], "tau": t, "gamma": g, "rf": r}
Json prior_to_json(const PriorSpec& p);
PriorSpec prior_from_json(const Json& j);

// {"target": "drift"|"returns", "confidence": t, "P": [[...]], "nu": [...], "covV": [[...]]}
Json views_to_json(const ViewSet& v);
ViewSet views_from_json(const Json& j);

// {"method": ..., "mean": [...], "cov": [[...]], "lambda_used": number|"inf"|null}
Json posterior_to_json(const PosteriorUpdate& p);
PosteriorUpdate posterior_from_json(const Json& j);

Json report_to_json(const RunReport& r);
RunReport report_from_json(const Json& j);

}  // namespace gwb
