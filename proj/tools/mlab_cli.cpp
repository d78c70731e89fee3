#include <CLI11.hpp>
#include <cxxabi.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mlab/mlab.hpp"

using namespace mlab;
using io::json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInputError = 2 };

struct Options {
  std::string in, preset, out;
  std::string format = "json";
  std::optional<double> tolerance;
  std::string schedule = "geometric:10";
  std::size_t decades = 8;
  std::string mode = "validate";
};

struct Negative : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string preset_dir() {
  if (const char* env = std::getenv("MONODROMY_LAB_PRESETS")) return env;
  return MLAB_PRESET_DIR;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw SchemaError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load(const Options& o) {
  if (o.in.empty() == o.preset.empty()) throw SchemaError("give exactly one of --in or --preset");
  const std::string path = o.preset.empty() ? o.in : preset_dir() + "/" + o.preset + ".json";
  if (!o.preset.empty() && !std::ifstream(path)) throw SchemaError("unknown preset '" + o.preset + "'");
  return io::parse_text(read_file(path));
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw SchemaError("cannot write '" + o.out + "'");
  f << text;
}

void require_json(const Options& o) {
  if (o.format != "json") throw SchemaError("--format " + o.format + " is not available for this command");
}

std::string error_name(const std::exception& e) {
  int status = 0;
  char* d = abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status);
  std::string s = status == 0 && d ? d : typeid(e).name();
  std::free(d);
  if (auto k = s.rfind("::"); k != std::string::npos) s = s.substr(k + 2);
  return s;
}

std::string real17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Schedule parse_schedule(const std::string& s) {
  if (s == "constant") return Schedule{Schedule::Kind::Constant};
  if (s == "geometric") return Schedule{};
  const std::string prefix = "geometric:";
  if (s.rfind(prefix, 0) == 0) {
    Scalar base = io::parse_scalar(s.substr(prefix.size()), 1, "--schedule");
    if (!base.is_rational() || base <= Scalar(1)) throw SchemaError("--schedule: base must be a rational greater than 1");
    return Schedule{Schedule::Kind::Geometric, base};
  }
  throw SchemaError("--schedule: expected constant, geometric or geometric:<base>");
}

json family_json(const AdmissibleFamily& fam, io::Writer& w) {
  json out = json::array();
  for (std::size_t i = 0; i < fam.cone.faces().size(); ++i)
    out.push_back({{"face", fam.cone.faces()[i].rays}, {"filtration", w.filtration(fam.filtrations[i])}});
  return out;
}

json rays_json(const Cone& c, io::Writer& w) {
  json out = json::array();
  for (const auto& r : c.rays()) out.push_back(w.vec(r));
  return out;
}

// ---- commands

int cmd_check(const Options& o) {
  require_json(o);
  json doc = load(o);
  auto obj = io::read_logpoint_document(doc, "");
  auto rep = check_membership(obj);
  io::Writer w;
  json body{{"member", rep.ok}, {"violation", rep.violation}, {"magnitudes_verified", rep.magnitudes_verified}, {"rays", rays_json(obj.cone(), w)}};
  if (rep.family) body["family"] = family_json(*rep.family, w);
  emit(o, io::dump(w.finish("membership-report", body)));
  return rep.ok ? kOk : kNegative;
}

int cmd_rmf(const Options& o) {
  require_json(o);
  json doc = load(o);
  auto [kind, r] = io::open(doc);
  io::expect_kind(kind, {"rmf", "logpoint"}, "");
  io::RmfInput in;
  if (kind == "rmf") {
    in = io::read_rmf(doc, r, "");
  } else {
    auto obj = io::read_logpoint(doc, r, "");
    in = {obj.w(), io::assemble("", [&] { return obj.n(); })};
  }
  auto m = rmf(in.w, in.n);
  if (!m) throw Negative("DoesNotExist: no relative monodromy filtration for this nilpotent and weight filtration");
  emit(o, io::dump(io::write_filtration(*m)));
  return kOk;
}

int cmd_check_admissible(const Options& o) {
  require_json(o);
  json doc = load(o);
  auto [kind, r] = io::open(doc);
  io::expect_kind(kind, {"cone-action", "logpoint"}, "");
  ConeAction a = kind == "logpoint" ? io::read_logpoint(doc, r, "").action() : io::read_cone_action(doc, r, "");
  auto rep = check_admissible(a);
  io::Writer w;
  json body{{"admissible", rep.admissible}, {"failure", rep.failure}, {"rays", rays_json(a.cone(), w)}};
  if (rep.family) {
    body["exact"] = rep.family->exact;
    body["family"] = family_json(*rep.family, w);
  }
  emit(o, io::dump(w.finish("admissibility-report", body)));
  if (!rep.admissible) std::cerr << "NotAdmissible: " << rep.failure << "\n";
  return rep.admissible ? kOk : kNegative;
}

int cmd_deligne_split(const Options& o) {
  require_json(o);
  json doc = load(o);
  auto [kind, r] = io::open(doc);
  io::expect_kind(kind, {"deligne-split"}, "");
  auto in = io::read_split(doc, r, "");
  Filtration m;
  if (in.m) {
    m = *in.m;
  } else if (auto found = rmf(in.w, in.n)) {
    m = *found;
  } else {
    throw Negative("DoesNotExist: no relative monodromy filtration for this nilpotent and weight filtration");
  }
  auto y = deligne_splitting(in.n, in.w, m, in.y);
  emit(o, io::dump(io::write_splitting(y)));
  return kOk;
}

int cmd_sl2_data(const Options& o) {
  require_json(o);
  json doc = load(o);
  auto [kind, r] = io::open(doc);
  io::expect_kind(kind, {"deligne-system", "boundary-setup"}, "");
  DeligneSystem s;
  if (kind == "deligne-system") {
    s = io::read_system(doc, r, "");
  } else {
    auto in = io::read_setup(doc, r, "");
    s = make_setup(in.object, in.mu, in.lattice_basis).system;
  }
  if (auto v = validate_system(s)) throw Negative("NotADeligneSystem: " + v->what);
  emit(o, io::dump(io::write_sl2(build_sl2_data(s))));
  return kOk;
}

int cmd_ratios(const Options& o) {
  require_json(o);
  json doc = load(o);
  auto [kind, r] = io::open(doc);
  io::expect_kind(kind, {"ratio-point"}, "");
  Cone c(io::Reader::monoid(io::Reader::field(doc, "monoid", ""), "monoid"));
  auto parts = io::read_chain_parts(io::Reader::field(doc, "chain", ""), r, c, "chain");
  std::optional<RatioPoint> mu;
  try {
    mu.emplace(c, parts.chain, parts.witnesses);
  } catch (const Error& e) {
    if (o.mode == "validate") throw Negative(error_name(e) + ": " + e.what());
    throw SchemaError(std::string("chain: ") + e.what());
  }
  io::Writer w;
  json body;
  if (o.mode == "validate") {
    body = {{"point", io::write_ratio_point(*mu)}, {"markers", mu->markers()}, {"rank_one", mu->is_rank_one()}};
  } else if (o.mode == "evaluate") {
    const std::size_t m = c.monoid().size();
    json values = json::array();
    for (std::size_t i = 0; i < m; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m; ++j) {
        try {
          auto v = mu->evaluate_generators(i, j);
          row.push_back(v.infinite ? json("inf") : w.scalar(v.value));
        } catch (const UndefinedPair&) {
          row.push_back(nullptr);
        }
      }
      values.push_back(row);
    }
    body = {{"generators", c.monoid().generators()}, {"values", values}};
  } else if (o.mode == "sample") {
    json samples = json::array();
    for (const auto& [nu, y] : path_samples(RatioPath{*mu, parse_schedule(o.schedule)}, o.decades))
      samples.push_back({{"y", w.vec(y)}, {"point", io::write_ratio_point(nu)}});
    body = {{"samples", samples}};
  } else {
    throw SchemaError("--mode: expected validate, evaluate or sample");
  }
  emit(o, io::dump(w.finish("ratio-" + o.mode, body)));
  return kOk;
}

int cmd_asymptote(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw SchemaError("--format: expected json or csv");
  json doc = load(o);
  auto [kind, r] = io::open(doc);
  io::expect_kind(kind, {"boundary-setup"}, "");
  auto in = io::read_setup(doc, r, "");
  auto schedule = parse_schedule(o.schedule);
  auto s = make_setup(in.object, in.mu, in.lattice_basis);
  auto rows = sweep(s, schedule, o.decades);
  const std::size_t n = s.length();
  if (o.format == "csv") {
    std::string text;
    for (std::size_t j = 1; j <= n; ++j) text += "y" + std::to_string(j) + ",";
    for (std::size_t j = 1; j < n; ++j) text += "r" + std::to_string(j) + ",";
    text += "distance\n";
    for (const auto& row : rows) {
      for (const auto& y : row.y) text += real17(y.real_value()) + ",";
      for (const auto& x : row.ratios) text += real17(x.real_value()) + ",";
      text += real17(row.distance) + "\n";
    }
    emit(o, text);
  } else {
    io::Writer w;
    json table = json::array();
    for (const auto& row : rows) table.push_back({{"y", w.vec(row.y)}, {"ratios", w.vec(row.ratios)}, {"distance", real17(row.distance)}});
    emit(o, io::dump(w.finish("convergence-table", {{"limit", w.mat(s.sl2.limit())}, {"rows", table}})));
  }
  if (o.tolerance && !rows.empty() && !(rows.back().distance < *o.tolerance)) {
    std::cerr << "NotConverged: final distance " << real17(rows.back().distance) << " is not below " << real17(*o.tolerance) << "\n";
    return kNegative;
  }
  return kOk;
}

json graded_dims(const std::map<int, std::size_t>& m) {
  json out = json::object();
  for (const auto& [w, d] : m) out[std::to_string(w)] = d;
  return out;
}

int cmd_pushforward(const Options& o) {
  require_json(o);
  json doc = load(o);
  auto [kind, r] = io::open(doc);
  io::expect_kind(kind, {"elliptic-rep"}, "");
  auto e = io::read_rep(doc, r, "");
  auto c = cohomology(e);
  json terms = json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& h = c.h[i];
    auto rep = check_AY_membership(h);
    std::map<int, std::size_t> frob;
    for (const auto& [wt, p] : h.grading().parts()) frob[wt] = p.dim();
    terms.push_back({{"degree", i},
                     {"dimension", h.dim()},
                     {"weight_graded_dims", graded_dims(h.w().graded_dims())},
                     {"frobenius_weights", graded_dims(frob)},
                     {"monodromy_trivial", h.ray_ops()[0].is_zero()},
                     {"member", rep.ok},
                     {"violation", rep.violation},
                     {"object", io::write_logpoint(h)}});
  }
  json body{{"dims", c.dims()}, {"unipotent_dimension", c.unipotent_part.cols()}, {"cohomology", terms}};
  io::Writer w;
  try {
    auto l = lefschetz_map(e);
    body["lefschetz"] = {{"iso_of_sheaves", l.iso_of_sheaves}, {"iso_in_category", l.iso_in_category}, {"matrix", w.mat(l.matrix)}};
  } catch (const NotUnipotent& ex) {
    body["lefschetz"] = {{"skipped", ex.what()}};
  }
  auto p = check_pushforward_criterion(e);
  body["criterion"] = {{"unipotent", p.unipotent}, {"i", p.i}, {"ii", p.ii}, {"iii", p.iii}, {"iv", p.iv}, {"agree", p.agree()}};
  emit(o, io::dump(w.finish("pushforward-report", body)));
  return kOk;
}

int cmd_classify(const Options& o) {
  require_json(o);
  json doc = load(o);
  auto obj = io::read_logpoint_document(doc, "");
  auto c = classify(obj);
  io::Writer w;
  json pieces = json::array();
  for (const auto& [wt, ex] : c.pieces) {
    json parts = json::array();
    for (const auto& p : ex.parts) parts.push_back({{"r", p.r}, {"weight", p.weight}, {"frobenius", w.mat(p.f)}});
    pieces.push_back({{"weight", wt}, {"parts", parts}});
  }
  json body{{"pieces", pieces}, {"model", io::write_logpoint(c.model)}, {"iso", w.mat(c.iso)}};
  emit(o, io::dump(w.finish("classification", body)));
  return kOk;
}

int cmd_normalize(const Options& o) {
  require_json(o);
  emit(o, io::dump(io::normalize(load(o))));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with monodromy filtrations, admissible cone actions and their degenerations"};
  app.require_subcommand(1);
  Options opt;
  std::function<int(const Options&)> run;

  auto add = [&](const std::string& name, const std::string& help, std::function<int(const Options&)> f, const std::string& in_alias = "",
                 const std::string& out_alias = "") {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--in" + (in_alias.empty() ? "" : "," + in_alias), opt.in, "input JSON file, - for stdin");
    sub->add_option("--preset", opt.preset, "load a shipped preset by name");
    sub->add_option("--out" + (out_alias.empty() ? "" : "," + out_alias), opt.out, "output file (default stdout)");
    sub->add_option("--format", opt.format, "json or csv");
    sub->callback([&run, f] { run = f; });
    return sub;
  };

  add("check", "membership report for an object over a log point", cmd_check);
  add("rmf", "relative monodromy filtration", cmd_rmf);
  add("check-admissible", "admissibility of a cone action with its filtration family", cmd_check_admissible);
  add("deligne-split", "Deligne splitting of a weight filtration", cmd_deligne_split);
  add("sl2-data", "SL(2)-data of a Deligne system", cmd_sl2_data);
  auto* ratios = add("ratios", "validate, evaluate or sample a point of the space of ratios", cmd_ratios);
  ratios->add_option("--mode", opt.mode, "validate, evaluate or sample");
  ratios->add_option("--schedule", opt.schedule, "constant, geometric or geometric:<base>");
  ratios->add_option("--decades", opt.decades, "number of samples");
  auto* asym = add("asymptote", "convergence table toward the limit operator", cmd_asymptote, "--setup");
  asym->add_option("--schedule", opt.schedule, "constant, geometric or geometric:<base>");
  asym->add_option("--decades", opt.decades, "number of rows");
  asym->add_option("--tolerance", opt.tolerance, "exit 1 unless the final distance is below this");
  add("pushforward", "higher direct images of a representation", cmd_pushforward, "--rep", "--report");
  add("classify", "decomposition of an object over the standard log point", cmd_classify);
  add("normalize", "re-emit a document in canonical form", cmd_normalize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  try {
    return run(opt);
  } catch (const Negative& e) {
    std::cerr << e.what() << "\n";
    return kNegative;
  } catch (const SchemaError& e) {
    std::cerr << "SchemaError: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << error_name(e) << ": " << e.what() << "\n";
    return kNegative;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
