#include "msopt/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "msopt/error.hpp"

namespace msopt {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  return v.get<double>();
}

double bound_value(const json& v, double infinite, const std::string& path) {
  if (v.is_null()) return infinite;
  return number(v, path);
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ParseError(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

Sense parse_sense(const json& v, const std::string& path) {
  if (v == "LE") return Sense::LE;
  if (v == "GE") return Sense::GE;
  if (v == "EQ") return Sense::EQ;
  throw ParseError(path, "sense must be LE, GE or EQ");
}

std::vector<Term> parse_coeffs(const json& v, const std::string& path) {
  if (!v.is_object()) throw ParseError(path, "expected an object of index: value");
  std::vector<Term> terms;
  for (auto it = v.begin(); it != v.end(); ++it) {
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path, "key '" + it.key() + "' is not a variable index");
    }
    terms.push_back({idx, number(it.value(), path + "." + it.key())});
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  return terms;
}

json dump_coeffs(const std::vector<Term>& terms) {
  json obj = json::object();
  for (const Term& t : terms) obj[std::to_string(t.index)] = t.value;
  return obj;
}

json bound_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

MultiScaleInstance parse_multiscale(const json& doc) {
  MultiScaleInstance inst;
  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) inst.name = *it;
  if (auto it = doc.find("description"); it != doc.end() && it->is_string()) inst.description = *it;

  const json& fs = field(doc, "first_stage", "");
  inst.first_stage.c = numbers(field(fs, "c", "first_stage"), "first_stage.c");
  const std::size_t nx = inst.first_stage.c.size();
  if (auto it = fs.find("rows"); it != fs.end()) {
    if (!it->is_array()) throw ParseError("first_stage.rows", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = "first_stage.rows[" + std::to_string(i) + "]";
      const json& r = (*it)[i];
      inst.first_stage.rows.push_back(Row{parse_coeffs(field(r, "coeffs", p), p + ".coeffs"),
                                          parse_sense(field(r, "sense", p), p + ".sense"),
                                          number(field(r, "rhs", p), p + ".rhs")});
    }
  }
  const bool has_upper = fs.contains("x_upper");
  const bool has_lower = fs.contains("x_lower");
  if (has_upper || has_lower) {
    inst.first_stage.x_bounds.assign(nx, VarBounds{});
    if (has_upper) {
      const json& u = fs["x_upper"];
      if (!u.is_array() || u.size() != nx) throw ParseError("first_stage.x_upper", "expected one entry per x");
      for (std::size_t k = 0; k < nx; ++k) inst.first_stage.x_bounds[k].upper = bound_value(u[k], kInf, "first_stage.x_upper");
    }
    if (has_lower) {
      const json& l = fs["x_lower"];
      if (!l.is_array() || l.size() != nx) throw ParseError("first_stage.x_lower", "expected one entry per x");
      for (std::size_t k = 0; k < nx; ++k) inst.first_stage.x_bounds[k].lower = bound_value(l[k], -kInf, "first_stage.x_lower");
    }
  }

  const json& subs = field(doc, "subperiods", "");
  if (!subs.is_array()) throw ParseError("subperiods", "expected an array");
  for (std::size_t s = 0; s < subs.size(); ++s) {
    const std::string p = "subperiods[" + std::to_string(s) + "]";
    const json& sj = subs[s];
    Subperiod sp;
    if (auto it = sj.find("weight"); it != sj.end()) sp.weight = number(*it, p + ".weight");
    sp.q = numbers(field(sj, "q", p), p + ".q");
    if (auto it = sj.find("y_upper"); it != sj.end()) {
      if (!it->is_array() || it->size() != sp.q.size()) throw ParseError(p + ".y_upper", "expected one entry per y");
      for (const auto& v : *it) sp.y_bounds.push_back({0.0, bound_value(v, kInf, p + ".y_upper")});
    }
    const json& rows = field(sj, "rows", p);
    if (!rows.is_array()) throw ParseError(p + ".rows", "expected an array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rp = p + ".rows[" + std::to_string(i) + "]";
      const json& r = rows[i];
      SubperiodRow row;
      if (auto it = r.find("x_coeffs"); it != r.end()) row.x_coeffs = parse_coeffs(*it, rp + ".x_coeffs");
      if (auto it = r.find("y_coeffs"); it != r.end()) row.y_coeffs = parse_coeffs(*it, rp + ".y_coeffs");
      row.sense = parse_sense(field(r, "sense", rp), rp + ".sense");
      row.rhs = number(field(r, "rhs", rp), rp + ".rhs");
      sp.rows.push_back(std::move(row));
    }
    inst.subperiods.push_back(std::move(sp));
  }
  try {
    inst.validate();
  } catch (const Error& e) {
    throw ParseError("instance", e.what());
  }
  return inst;
}

CapacityInstance parse_capacity(const json& doc) {
  CapacityInstance cap;
  cap.J = count(field(doc, "J", ""), "J");
  cap.I = count(field(doc, "I", ""), "I");
  cap.S = count(field(doc, "S", ""), "S");
  const json& a = field(doc, "a", "");
  if (!a.is_array()) throw ParseError("a", "expected a nested array");
  for (std::size_t s = 0; s < a.size(); ++s) {
    std::vector<std::vector<double>> as;
    if (!a[s].is_array()) throw ParseError("a[" + std::to_string(s) + "]", "expected an array");
    for (std::size_t i = 0; i < a[s].size(); ++i) {
      as.push_back(numbers(a[s][i], "a[" + std::to_string(s) + "][" + std::to_string(i) + "]"));
    }
    cap.a.push_back(std::move(as));
  }
  cap.c = numbers(field(doc, "c", ""), "c");
  const json& d = field(doc, "d", "");
  if (!d.is_array()) throw ParseError("d", "expected a nested array");
  for (std::size_t s = 0; s < d.size(); ++s) cap.d.push_back(numbers(d[s], "d[" + std::to_string(s) + "]"));
  const json& f = field(doc, "f", "");
  if (!f.is_array()) throw ParseError("f", "expected a nested array");
  for (std::size_t i = 0; i < f.size(); ++i) cap.f.push_back(numbers(f[i], "f[" + std::to_string(i) + "]"));
  cap.g = numbers(field(doc, "g", ""), "g");
  try {
    cap.validate();
  } catch (const Error& e) {
    throw ParseError("instance", e.what());
  }
  return cap;
}

std::string pretty(const json& j) { return j.dump(1) + "\n"; }

}  // namespace

AnyInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line number
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseError("document", e.what(), line);
  }
  if (!doc.is_object()) throw ParseError("document", "top level must be an object");
  const json& version = field(doc, "schema_version", "");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
    throw SchemaVersionMismatch("schema_version " + version.dump() + " is not supported (expected \"" +
                                std::string(kSchemaVersion) + "\")");
  }
  const json& kind = field(doc, "kind", "");
  if (kind == "multiscale") return parse_multiscale(doc);
  if (kind == "capacity") return parse_capacity(doc);
  throw ParseError("kind", "expected \"multiscale\" or \"capacity\"");
}

AnyInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string dump_instance(const MultiScaleInstance& inst) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "multiscale";
  doc["name"] = inst.name;
  doc["description"] = inst.description;
  json fs;
  fs["c"] = inst.first_stage.c;
  fs["rows"] = json::array();
  for (const Row& r : inst.first_stage.rows) {
    fs["rows"].push_back({{"coeffs", dump_coeffs(r.coeffs)}, {"sense", to_string(r.sense)}, {"rhs", r.rhs}});
  }
  if (!inst.first_stage.x_bounds.empty()) {
    json upper = json::array(), lower = json::array();
    bool any_lower = false;
    for (const auto& b : inst.first_stage.x_bounds) {
      upper.push_back(bound_json(b.upper));
      lower.push_back(bound_json(b.lower));
      any_lower = any_lower || b.lower != 0.0;
    }
    fs["x_upper"] = upper;
    if (any_lower) fs["x_lower"] = lower;
  }
  doc["first_stage"] = fs;
  doc["subperiods"] = json::array();
  for (const auto& sp : inst.subperiods) {
    json sj;
    sj["weight"] = sp.weight;
    sj["q"] = sp.q;
    if (!sp.y_bounds.empty()) {
      json upper = json::array();
      for (const auto& b : sp.y_bounds) upper.push_back(bound_json(b.upper));
      sj["y_upper"] = upper;
    }
    sj["rows"] = json::array();
    for (const auto& r : sp.rows) {
      sj["rows"].push_back({{"x_coeffs", dump_coeffs(r.x_coeffs)},
                            {"y_coeffs", dump_coeffs(r.y_coeffs)},
                            {"sense", to_string(r.sense)},
                            {"rhs", r.rhs}});
    }
    doc["subperiods"].push_back(sj);
  }
  return pretty(doc);
}

std::string dump_instance(const CapacityInstance& cap) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "capacity";
  doc["J"] = cap.J;
  doc["I"] = cap.I;
  doc["S"] = cap.S;
  doc["a"] = cap.a;
  doc["c"] = cap.c;
  doc["d"] = cap.d;
  doc["f"] = cap.f;
  doc["g"] = cap.g;
  return pretty(doc);
}

namespace {
void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}
}  // namespace

void write_instance(const MultiScaleInstance& inst, const std::filesystem::path& path) {
  write_text(dump_instance(inst), path);
}

void write_instance(const CapacityInstance& cap, const std::filesystem::path& path) {
  write_text(dump_instance(cap), path);
}

MultiScaleInstance as_multiscale(const AnyInstance& any) {
  if (const auto* cap = std::get_if<CapacityInstance>(&any)) return lower_capacity(*cap);
  return std::get<MultiScaleInstance>(any);
}

}  // namespace msopt
