#include "service.hpp"

#include <sstream>

#include "fuzzdss/error.hpp"
#include "fuzzdss/inference.hpp"
#include "fuzzdss/json_io.hpp"
#include "fuzzdss/number_format.hpp"
#include "fuzzdss/referral.hpp"
#include "fuzzdss/reporting.hpp"
#include "fuzzdss/store.hpp"

namespace fuzzdss::http {

namespace {

Response json_response(int status, const ordered_json& body) {
  return {status, body.dump(), "application/json", {}};
}

Response error_response(int status, std::string_view code, std::string message,
                        ordered_json details = ordered_json::object()) {
  return json_response(status, {{"status", status},
                                {"code", code},
                                {"message", std::move(message)},
                                {"details", std::move(details)}});
}

Response binding_error(const BindingError& e) {
  const bool missing = e.kind() == BindingError::Kind::missing_variable;
  return error_response(422, missing ? codes::missing_variable : codes::unknown_variable, e.what(),
                        {{"variables", e.variables()}});
}

Response range_error(const RangeError& e) {
  return error_response(422, codes::out_of_universe, e.what(),
                        {{"variable", e.variable()},
                         {"value", e.value()},
                         {"lower", e.lower()},
                         {"upper", e.upper()}});
}

std::optional<std::string> query_value(const std::multimap<std::string, std::string>& query,
                                       const std::string& key) {
  auto it = query.find(key);
  if (it == query.end()) return std::nullopt;
  return it->second;
}

bool is_csv(const std::string& content_type) {
  return content_type.rfind("text/csv", 0) == 0;
}

}  // namespace

Service::Service(ServiceOptions options)
    : options_(std::move(options)), model_json_(model_to_json(options_.model).dump()) {}

Response Service::handle(const Request& request) {
  Response response;
  try {
    const auto& p = request.path;
    const auto& m = request.method;
    auto route = [&](const char* method, auto&& handler) {
      if (m == method) return handler();
      if (m == "OPTIONS") return Response{204, "", "text/plain", {}};
      return error_response(405, codes::method_not_allowed, m + " is not allowed on " + p);
    };
    if (p == "/api/v1/evaluate") {
      response = route("POST", [&] { return evaluate(request.body); });
    } else if (p == "/api/v1/model") {
      response = route("GET", [&] { return model(); });
    } else if (p == "/api/v1/surface") {
      response = route("GET", [&] { return surface(request.query); });
    } else if (p == "/api/v1/referrals") {
      response = route("POST", [&] { return post_referrals(request.body, request.content_type); });
    } else if (p == "/api/v1/reports/frequency") {
      response = route("GET", [&] { return frequency(request.query); });
    } else {
      response = error_response(404, codes::not_found, "no such endpoint: " + p);
    }
  } catch (const std::exception&) {
    response = error_response(500, codes::internal_error, "internal error");
  }
  if (options_.cors_origin) {
    response.headers.emplace_back("Access-Control-Allow-Origin", *options_.cors_origin);
    if (request.method == "OPTIONS") {
      response.headers.emplace_back("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      response.headers.emplace_back("Access-Control-Allow-Headers", "Content-Type");
    }
  }
  return response;
}

Response Service::evaluate(const std::string& body) const {
  const auto json = ordered_json::parse(body, nullptr, false);
  if (json.is_discarded()) return error_response(400, codes::parse_error, "request body is not valid JSON");
  if (!json.is_object() || !json.contains("inputs") || !json["inputs"].is_object()) {
    return error_response(400, codes::bad_request, "expected {\"inputs\": {<variable>: <number>, ...}}");
  }
  CrispInputs inputs;
  for (const auto& [name, value] : json["inputs"].items()) {
    if (!value.is_number()) {
      return error_response(400, codes::bad_request, "input '" + name + "' must be a number",
                            {{"variable", name}});
    }
    inputs[name] = value.get<double>();
  }
  try {
    return json_response(200, result_to_json(infer(options_.model, inputs), options_.model));
  } catch (const BindingError& e) {
    return binding_error(e);
  } catch (const RangeError& e) {
    return range_error(e);
  }
}

Response Service::model() const {
  return {200, model_json_, "application/json", {}};
}

Response Service::surface(const std::multimap<std::string, std::string>& query) const {
  auto x = query_value(query, "x");
  auto y = query_value(query, "y");
  if (!x || !y) return error_response(422, codes::bad_grid_request, "x and y are required");
  std::size_t resolution = default_surface_resolution;
  if (auto r = query_value(query, "resolution")) {
    auto value = parse_number(*r);
    if (!value || *value != static_cast<double>(static_cast<long long>(*value)) || *value < 0) {
      return error_response(422, codes::bad_grid_request, "resolution must be a whole number",
                            {{"resolution", *r}});
    }
    resolution = static_cast<std::size_t>(*value);
  }
  CrispInputs fixed;
  for (const auto& [key, text] : query) {
    if (key.rfind("fixed.", 0) != 0) continue;
    auto value = parse_number(text);
    if (!value) {
      return error_response(422, codes::bad_grid_request, "'" + key + "' must be a number", {{"parameter", key}});
    }
    fixed[key.substr(6)] = *value;
  }
  try {
    return json_response(200, grid_to_json(surface_grid(options_.model, *x, *y, fixed, resolution)));
  } catch (const GridError& e) {
    return error_response(422, codes::bad_grid_request, e.what());
  }
}

Response Service::post_referrals(const std::string& body, const std::string& content_type) {
  if (!options_.store) return error_response(503, codes::store_not_configured, "no referral store configured");

  std::vector<ReferralRecord> records;
  if (is_csv(content_type)) {
    std::istringstream in(body);
    auto ingest = parse_referral_csv(in);
    if (ingest.header_error) return error_response(422, codes::invalid_record, *ingest.header_error);
    if (!ingest.errors.empty()) {
      ordered_json rows = ordered_json::array();
      for (const auto& e : ingest.errors) {
        rows.push_back({{"row", e.row}, {"field", e.field}, {"message", e.message}});
      }
      return error_response(422, codes::invalid_record,
                            std::to_string(ingest.errors.size()) + " invalid row(s); nothing was stored",
                            {{"errors", std::move(rows)}});
    }
    records = std::move(ingest.records);
  } else {
    const auto json = ordered_json::parse(body, nullptr, false);
    if (json.is_discarded()) return error_response(400, codes::parse_error, "request body is not valid JSON");
    const auto items = json.is_array() ? json : ordered_json::array({json});
    for (std::size_t i = 0; i < items.size(); ++i) {
      std::string why;
      auto record = items[i].is_object() ? decode_record(items[i].dump(), &why) : std::nullopt;
      if (!record) {
        if (why.empty()) why = "a record must be a JSON object";
        return error_response(422, codes::invalid_record, "record " + std::to_string(i) + ": " + why,
                              {{"index", i}});
      }
      records.push_back(std::move(*record));
    }
  }

  // The store itself is model-agnostic; this server only accepts records it
  // can evaluate with its active model.
  ordered_json missing = ordered_json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::vector<std::string> names;
    for (const auto& var : options_.model.inputs) {
      if (!records[i].counts.count(var.name)) names.push_back(var.name);
    }
    if (!names.empty()) missing.push_back({{"index", i}, {"student_id", records[i].student_id}, {"missing", names}});
  }
  if (!missing.empty()) {
    return error_response(422, codes::missing_variable,
                          std::to_string(missing.size()) + " record(s) lack counts for model inputs",
                          {{"records", std::move(missing)}});
  }

  std::lock_guard lock(store_mutex_);
  try {
    auto store = append_records(open_store(*options_.store), records);
    return json_response(200, {{"appended", records.size()}, {"record_count", store.record_count}});
  } catch (const StoreLocked& e) {
    return error_response(409, codes::store_locked, e.what());
  } catch (const StoreError& e) {
    return error_response(500, codes::store_error, e.what());
  }
}

Response Service::frequency(const std::multimap<std::string, std::string>& query) const {
  if (!options_.store) return error_response(503, codes::store_not_configured, "no referral store configured");
  RecordFilter filter;
  for (const char* key : {"from", "to"}) {
    if (auto text = query_value(query, key)) {
      auto date = parse_iso_date(*text);
      if (!date) {
        return error_response(400, codes::bad_request, std::string("'") + key + "' must be YYYY-MM-DD",
                              {{"parameter", key}, {"value", *text}});
      }
      (std::string_view(key) == "from" ? filter.from : filter.to) = *date;
    }
  }
  filter.student_id = query_value(query, "student");

  try {
    const auto loaded = load_records(open_store(*options_.store), filter);
    const auto items = batch_infer(options_.model, loaded.records);
    const auto results = successful_results(items);
    auto body = frequency_to_json(frequency_report(results, band_labels(options_.model)));
    body["skipped"] = (items.size() - results.size()) + loaded.errors.size();
    return json_response(200, body);
  } catch (const StoreError& e) {
    return error_response(500, codes::store_error, e.what());
  }
}

}  // namespace fuzzdss::http
