#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "../http/server.hpp"
#include "fuzzdss/builtin.hpp"
#include "fuzzdss/dsl.hpp"
#include "fuzzdss/error.hpp"
#include "fuzzdss/inference.hpp"
#include "fuzzdss/json_io.hpp"
#include "fuzzdss/number_format.hpp"
#include "fuzzdss/referral.hpp"
#include "fuzzdss/reporting.hpp"
#include "fuzzdss/store.hpp"
#include "fuzzdss/validate.hpp"

namespace fuzzdss::cli {

namespace {

/// Thrown by command bodies; carries the exit code and a message for stderr.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(std::string message) { throw Failure{exit_usage, std::move(message)}; }
[[noreturn]] void data_error(std::string message) { throw Failure{exit_data, std::move(message)}; }

std::string read_source(const std::string& path, std::istream& in) {
  std::ostringstream ss;
  if (path == "-") {
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) data_error("cannot read '" + path + "'");
  ss << file.rdbuf();
  if (file.bad()) data_error("cannot read '" + path + "'");
  return ss.str();
}

Model parse_or_fail(const std::string& text, const std::string& origin, std::ostream& err) {
  auto parsed = parse_model({text, origin});
  if (parsed.ok()) return std::move(*parsed.model);
  for (const auto& e : parsed.errors) err << format_parse_error(e, origin) << '\n';
  data_error(std::to_string(parsed.errors.size()) + " error(s) in model '" + origin + "'");
}

Model load_model(const std::string& ref, std::istream& in, std::ostream& err) {
  if (ref == "builtin") return builtin_student_model();
  return parse_or_fail(read_source(ref, in), ref, err);
}

/// "a=1,b=2" -> {a: 1, b: 2}
CrispInputs parse_assignments(const std::string& text, const char* flag) {
  CrispInputs values;
  if (text.empty()) return values;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      usage_error(std::string(flag) + ": expected name=value, got '" + pair + "'");
    }
    const auto name = pair.substr(0, eq);
    const auto value = parse_number(pair.substr(eq + 1));
    if (!value) usage_error(std::string(flag) + ": '" + pair.substr(eq + 1) + "' is not a number");
    if (!values.emplace(name, *value).second) usage_error(std::string(flag) + ": '" + name + "' given twice");
  }
  return values;
}

std::optional<Date> parse_date_flag(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  auto date = parse_iso_date(text);
  if (!date) usage_error(std::string(flag) + ": '" + text + "' is not a YYYY-MM-DD date");
  return date;
}

std::string combination_text(const std::vector<Antecedent>& combination) {
  std::string out;
  for (const auto& a : combination) {
    if (!out.empty()) out += " and ";
    out += a.variable + " is " + a.term;
  }
  return out;
}

/// Indented memberships, fired rules and unruled combinations.
void write_trace(std::ostream& out, const Model& model, const InferenceResult& result, const char* indent) {
  for (const auto& var : model.inputs) {
    auto it = result.memberships.find(var.name);
    if (it == result.memberships.end()) continue;
    out << indent << "membership " << var.name << ":";
    for (const auto& term : var.terms) out << ' ' << term.label << '=' << format_number(it->second.at(term.label));
    out << '\n';
  }
  for (const auto& f : result.fired_rules) {
    out << indent << "fired rule " << f.rule_index << " at " << format_number(f.strength) << ": "
        << rule_text(model.rules[f.rule_index]) << '\n';
  }
  for (const auto& combination : result.unruled_combinations) {
    out << indent << "no rule for: " << combination_text(combination) << '\n';
  }
}

void write_result(std::ostream& out, const Model& model, const InferenceResult& result) {
  out << "status: " << to_string(result.status) << '\n';
  if (result.ok()) {
    out << "crisp value: " << format_number(*result.crisp_value) << '\n';
    out << "category: " << *result.category << '\n';
  }
  write_trace(out, model, result, "  ");
}

void write_json(std::ostream& out, const ordered_json& json) { out << json.dump(2) << '\n'; }

struct Globals {
  std::string model = "builtin";
  bool json = false;
  std::string store;
};

std::filesystem::path require_store(const Globals& g) {
  if (g.store.empty()) usage_error("no referral store: pass --store <path> or set FUZZDSS_STORE");
  return g.store;
}

int cmd_eval(const Globals& g, const std::string& in_spec, std::istream& in, std::ostream& out,
             std::ostream& err) {
  const auto model = load_model(g.model, in, err);
  const auto inputs = parse_assignments(in_spec, "--in");
  InferenceResult result;
  try {
    result = infer(model, inputs);
  } catch (const Error& e) {
    data_error(e.what());
  }
  if (g.json) {
    write_json(out, result_to_json(result, model));
  } else {
    write_result(out, model, result);
  }
  return result.ok() ? exit_ok : exit_no_rule_fired;
}

/// Splits the optional `expected` column off a referral CSV so the rest can
/// go through the normal parser. Returns the expected label per CSV row.
std::map<std::size_t, std::string> strip_expected_column(std::string& text) {
  std::map<std::size_t, std::string> expected;
  std::vector<std::string> lines;
  {
    std::string line;
    std::istringstream ss(text);
    while (std::getline(ss, line)) lines.push_back(line);
  }
  auto blank = [](const std::string& l) {
    return std::all_of(l.begin(), l.end(), [](unsigned char c) { return std::isspace(c); });
  };
  auto header_at = std::find_if_not(lines.begin(), lines.end(), blank);
  if (header_at == lines.end()) return expected;
  std::string header_line = *header_at;
  if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
  auto header = split_csv_line(header_line);
  if (!header) return expected;
  auto trimmed = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::optional<std::size_t> column;
  for (std::size_t i = 0; i < header->size(); ++i) {
    if (trimmed((*header)[i]) == "expected") column = i;
  }
  if (!column) return expected;

  auto rejoin = [](const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) line += ',';
      line += csv_field(fields[i]);
    }
    return line;
  };
  for (auto it = header_at; it != lines.end(); ++it) {
    std::string line = *it;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    auto fields = split_csv_line(line);
    if (!fields) continue;  // left for the parser to report
    if (fields->size() != header->size()) {
      // Keep the row malformed once the header loses a column.
      if (fields->size() + 1 == header->size()) *it = line + ",";
      continue;
    }
    const auto row = static_cast<std::size_t>(it - lines.begin()) + 1;
    if (it != header_at) expected[row] = trimmed((*fields)[*column]);
    fields->erase(fields->begin() + static_cast<std::ptrdiff_t>(*column));
    *it = rejoin(*fields);
  }
  text.clear();
  for (const auto& line : lines) text += line + '\n';
  return expected;
}

void write_row_error(std::ostream& err, const RowError& e) {
  err << "row " << e.row;
  if (!e.field.empty()) err << ", field " << e.field;
  err << ": " << e.message << '\n';
}

int cmd_batch(const Globals& g, const std::string& path, std::istream& in, std::ostream& out,
              std::ostream& err) {
  const auto model = load_model(g.model, in, err);
  auto text = read_source(path, in);
  const auto expected = strip_expected_column(text);
  std::istringstream csv(text);
  auto ingest = parse_referral_csv(csv);
  if (ingest.header_error) data_error(*ingest.header_error);

  const auto items = batch_infer(model, ingest.records);
  std::vector<RowError> errors = ingest.errors;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].error) errors.push_back({ingest.record_rows[i], "", *items[i].error});
  }
  std::sort(errors.begin(), errors.end(), [](const RowError& a, const RowError& b) { return a.row < b.row; });
  for (const auto& e : errors) write_row_error(err, e);

  const auto labels = band_labels(model);
  const auto report = frequency_report(successful_results(items), labels);

  std::vector<InferenceResult> expected_results;
  std::vector<std::size_t> mismatched_rows;
  std::size_t compared = 0;
  auto expected_for = [&](std::size_t i) -> const std::string* {
    auto it = expected.find(ingest.record_rows[i]);
    return it == expected.end() || it->second.empty() ? nullptr : &it->second;
  };
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto* label = expected_for(i);
    if (!label) continue;
    InferenceResult r;
    r.status = InferenceStatus::ok;
    r.category = *label;
    expected_results.push_back(std::move(r));
    if (!items[i].result) continue;
    ++compared;
    if (items[i].result->category != *label) mismatched_rows.push_back(ingest.record_rows[i]);
  }
  const bool has_expected = !expected.empty();

  if (g.json) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!items[i].result) continue;
      const auto& record = items[i].record;
      ordered_json inputs = ordered_json::object();
      for (const auto& var : model.inputs) inputs[var.name] = record.counts.at(var.name);
      ordered_json row = {{"row", ingest.record_rows[i]},
                          {"student_id", record.student_id},
                          {"date", format_iso_date(record.recorded_at)},
                          {"inputs", std::move(inputs)},
                          {"result", result_to_json(*items[i].result, model)}};
      if (const auto* label = expected_for(i)) {
        row["expected"] = *label;
        row["match"] = items[i].result->category == *label;
      }
      rows.push_back(std::move(row));
    }
    ordered_json json_errors = ordered_json::array();
    for (const auto& e : errors) {
      json_errors.push_back({{"row", e.row}, {"field", e.field}, {"message", e.message}});
    }
    ordered_json doc = {{"rows", std::move(rows)}, {"errors", std::move(json_errors)},
                        {"report", frequency_to_json(report)}};
    if (has_expected) {
      doc["expected_report"] = frequency_to_json(frequency_report(expected_results, labels));
      doc["compared"] = compared;
      doc["mismatched_rows"] = mismatched_rows;
    }
    write_json(out, doc);
    return exit_ok;
  }

  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].result) continue;
    const auto& record = items[i].record;
    const auto& result = *items[i].result;
    out << "row " << ingest.record_rows[i] << "  " << record.student_id << "  " << format_iso_date(record.recorded_at);
    for (const auto& var : model.inputs) out << "  " << var.name << '=' << format_number(record.counts.at(var.name));
    out << '\n';
    if (result.ok()) {
      out << "  -> " << *result.category << " (" << format_number(*result.crisp_value) << ")\n";
    } else {
      out << "  -> no rule fired\n";
    }
    if (const auto* label = expected_for(i)) {
      out << "  expected " << *label << ": " << (result.category == *label ? "match" : "MISMATCH") << '\n';
    }
    write_trace(out, model, result, "    ");
  }
  out << "\nFrequency of recommended interventions\n" << frequency_table(report);
  if (has_expected) {
    out << "\nFrequency of expected labels\n" << frequency_table(frequency_report(expected_results, labels));
    out << "\nmatched " << compared - mismatched_rows.size() << " of " << compared << " labelled rows";
    if (!mismatched_rows.empty()) {
      out << "; mismatched rows:";
      for (auto row : mismatched_rows) out << ' ' << row;
    }
    out << '\n';
  }
  return exit_ok;
}

int cmd_report(const Globals& g, const std::string& from, const std::string& to, const std::string& student,
               std::istream& in, std::ostream& out, std::ostream& err) {
  const auto model = load_model(g.model, in, err);
  RecordFilter filter{parse_date_flag(from, "--from"), parse_date_flag(to, "--to"), std::nullopt};
  if (!student.empty()) filter.student_id = student;
  const auto path = require_store(g);
  LoadResult loaded;
  try {
    loaded = load_records(open_store(path), filter);
  } catch (const StoreError& e) {
    data_error(e.what());
  }
  for (const auto& e : loaded.errors) err << "store line " << e.line << ": " << e.message << '\n';
  const auto items = batch_infer(model, loaded.records);
  for (const auto& item : items) {
    if (item.error) {
      err << "record " << item.record.student_id << " " << format_iso_date(item.record.recorded_at) << ": "
          << *item.error << '\n';
    }
  }
  const auto results = successful_results(items);
  const auto report = frequency_report(results, band_labels(model));
  if (g.json) {
    auto json = frequency_to_json(report);
    json["skipped"] = (items.size() - results.size()) + loaded.errors.size();
    write_json(out, json);
  } else {
    out << frequency_table(report);
  }
  return exit_ok;
}

int cmd_surface(const Globals& g, const std::string& x, const std::string& y, const std::string& fixed_spec,
                std::size_t resolution, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto model = load_model(g.model, in, err);
  const auto fixed = parse_assignments(fixed_spec, "--fixed");
  SurfaceGrid grid;
  try {
    grid = surface_grid(model, x, y, fixed, resolution);
  } catch (const GridError& e) {
    data_error(e.what());
  }
  if (g.json) {
    write_json(out, grid_to_json(grid));
  } else {
    out << grid_to_csv(grid);
  }
  return exit_ok;
}

int cmd_validate(const Globals& g, std::size_t grid_points, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  const auto model = load_model(g.model, in, err);
  const auto diagnostics = validate_model(model, {.grid_points_per_axis = grid_points});
  const bool structural = has_structural_errors(diagnostics);
  if (g.json) {
    ordered_json list = ordered_json::array();
    for (const auto& d : diagnostics) list.push_back(diagnostic_to_json(d));
    write_json(out, {{"model", model.name}, {"structure_ok", !structural}, {"diagnostics", std::move(list)}});
  } else {
    out << "model " << model.name << ": structure " << (structural ? "INVALID" : "OK") << '\n';
    for (const auto& d : diagnostics) {
      out << to_string(d.severity) << " [" << to_string(d.kind) << "] " << d.message << '\n';
    }
    if (diagnostics.empty()) out << "no findings\n";
  }
  return structural ? exit_data : exit_ok;
}

int cmd_ingest(const Globals& g, const std::string& path, std::istream& in, std::ostream& out,
               std::ostream& err) {
  const auto store_path = require_store(g);
  const auto text = read_source(path, in);
  std::istringstream csv(text);
  const auto ingest = parse_referral_csv(csv);
  if (ingest.header_error) data_error(*ingest.header_error);
  for (const auto& e : ingest.errors) write_row_error(err, e);
  StoreHandle store;
  try {
    store = append_records(open_store(store_path), ingest.records);
  } catch (const StoreError& e) {
    data_error(e.what());
  }
  if (g.json) {
    write_json(out, {{"appended", ingest.records.size()},
                     {"rejected", ingest.errors.size()},
                     {"record_count", store.record_count}});
  } else {
    out << "appended " << ingest.records.size() << " record(s), rejected " << ingest.errors.size()
        << "; store holds " << store.record_count << '\n';
  }
  return exit_ok;
}

int cmd_serve(const Globals& g, const std::string& listen, const std::string& cors, std::istream& in,
              std::ostream& out, std::ostream& err) {
  auto address = http::parse_listen_address(listen);
  if (!address) usage_error("--listen: expected host:port, got '" + listen + "'");
  http::ServiceOptions options{load_model(g.model, in, err), std::nullopt, std::nullopt};
  if (!g.store.empty()) options.store = g.store;
  if (!cors.empty()) options.cors_origin = cors;
  http::Service service(std::move(options));
  const bool ok = http::serve(service, *address, [&](int port) {
    out << "listening on http://" << address->host << ':' << port << std::endl;
  });
  if (!ok) data_error("cannot listen on " + listen);
  return exit_ok;
}

int cmd_model_show(const Globals& g, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto model = load_model(g.model, in, err);
  if (g.json) {
    write_json(out, model_to_json(model));
    return exit_ok;
  }
  out << "model " << model.name << '\n';
  auto variable = [&](const char* kind, const LinguisticVariable& var) {
    out << kind << ' ' << var.name << " (" << var.display_name << ") range " << format_number(var.universe_min)
        << " to " << format_number(var.universe_max) << '\n';
    for (const auto& term : var.terms) {
      out << "  " << term.label << ": " << to_string(term.mf.shape);
      for (double p : term.mf.breakpoints()) out << ' ' << format_number(p);
      out << '\n';
    }
  };
  for (const auto& var : model.inputs) variable("input", var);
  variable("output", model.output);
  out << "bands\n";
  for (const auto& band : model.bands) {
    out << "  " << format_number(band.lower) << " to " << format_number(band.upper) << ": " << band.label << '\n';
  }
  out << "rules\n";
  for (std::size_t i = 0; i < model.rules.size(); ++i) out << "  " << i << ": " << rule_text(model.rules[i]) << '\n';
  return exit_ok;
}

int cmd_model_fmt(const Globals& g, const std::string& path, std::istream& in, std::ostream& out,
                  std::ostream& err) {
  const auto model = path.empty() ? load_model(g.model, in, err)
                                  : parse_or_fail(read_source(path, in), path == "-" ? "<stdin>" : path, err);
  const auto text = serialize_model(model);
  if (g.json) {
    write_json(out, {{"fzm", text}});
  } else {
    out << text;
  }
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy decision support for student behavior referrals.", "fuzzdss"};
  app.fallthrough();
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  app.add_option("--model", g.model, "'builtin' or a path to a .fzm model file")->capture_default_str();
  app.add_flag("--json", g.json, "Write a single JSON document to stdout");
  app.add_option("--store", g.store, "Referral store file (JSON lines)")->envname("FUZZDSS_STORE");

  auto* eval = app.add_subcommand("eval", "Evaluate one set of counts");
  std::string in_spec;
  eval->add_option("--in", in_spec, "name=value,... for every model input")->required();

  auto* batch = app.add_subcommand("batch", "Evaluate every row of a referral CSV");
  std::string batch_path = "-";
  batch->add_option("csv", batch_path, "CSV file, '-' for stdin")->capture_default_str();

  auto* report = app.add_subcommand("report", "Intervention frequencies over stored referrals");
  std::string from, to, student;
  report->add_option("--from", from, "First date, YYYY-MM-DD (inclusive)");
  report->add_option("--to", to, "Last date, YYYY-MM-DD (inclusive)");
  report->add_option("--student", student, "Only this student_id");

  auto* surface = app.add_subcommand("surface", "Sample the output over two inputs");
  std::string x, y, fixed;
  std::size_t resolution = default_surface_resolution;
  surface->add_option("--x", x, "Input on the first axis")->required();
  surface->add_option("--y", y, "Input on the second axis")->required();
  surface->add_option("--fixed", fixed, "name=value,... for the remaining inputs");
  surface->add_option("--resolution", resolution, "Points per axis (>= 2)")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Check a model for structural problems and dead zones");
  std::size_t grid_points = ValidationOptions{}.grid_points_per_axis;
  validate->add_option("--grid", grid_points, "Grid points per input for the dead-zone scan")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}));

  auto* ingest = app.add_subcommand("ingest", "Append referral CSV rows to the store");
  std::string ingest_path = "-";
  ingest->add_option("csv", ingest_path, "CSV file, '-' for stdin")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON API");
  std::string listen = "127.0.0.1:8080";
  std::string cors;
  serve->add_option("--listen", listen, "host:port")->capture_default_str()->envname("FUZZDSS_LISTEN");
  serve->add_option("--cors-origin", cors, "Value for Access-Control-Allow-Origin");

  auto* model = app.add_subcommand("model", "Inspect or reformat a model");
  model->require_subcommand(1);
  auto* model_show = model->add_subcommand("show", "Describe the model");
  auto* model_fmt = model->add_subcommand("fmt", "Print the canonical .fzm text");
  std::string fmt_path;
  model_fmt->add_option("file", fmt_path, "Model file to format, '-' for stdin (default: --model)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*eval) return cmd_eval(g, in_spec, in, out, err);
    if (*batch) return cmd_batch(g, batch_path, in, out, err);
    if (*report) return cmd_report(g, from, to, student, in, out, err);
    if (*surface) return cmd_surface(g, x, y, fixed, resolution, in, out, err);
    if (*validate) return cmd_validate(g, grid_points, in, out, err);
    if (*ingest) return cmd_ingest(g, ingest_path, in, out, err);
    if (*serve) return cmd_serve(g, listen, cors, in, out, err);
    if (*model_show) return cmd_model_show(g, in, out, err);
    if (*model_fmt) return cmd_model_fmt(g, fmt_path, in, out, err);
  } catch (const Failure& f) {
    err << "fuzzdss: " << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << "fuzzdss: " << e.what() << '\n';
    return exit_data;
  }
  return exit_usage;
}

}  // namespace fuzzdss::cli
