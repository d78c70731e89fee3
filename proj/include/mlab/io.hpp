#ifndef MLAB_IO_HPP
#define MLAB_IO_HPP

#include <json.hpp>

#include <cctype>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "direct_images.hpp"

// JSON documents carry "format": "monodromy-lab/1" and a "kind". Scalars are
// strings in the form printed by Scalar::str() ("3", "-1/2", "1+2*sqrt(2)");
// plain JSON integers are accepted on input. A document holding quadratic
// scalars states the real embedding once as "embedding": "+" or "-".

namespace mlab::io {

using json = nlohmann::json;

inline constexpr const char* kFormat = "monodromy-lab/1";

namespace detail {

inline bool is_rational_text(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (!digits) return false;
  if (i == s.size()) return true;
  if (s[i++] != '/') return false;
  digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  return digits && i == s.size();
}

inline Rational rational_text(std::string s, const std::string& path) {
  if (!is_rational_text(s)) throw SchemaError(path + ": not an exact rational: '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  r.set_str(s, 10);
  if (r.get_den() == 0) throw SchemaError(path + ": zero denominator");
  r.canonicalize();
  return r;
}

}  // namespace detail

/// Parses a scalar string; `sign` is the document's embedding.
inline Scalar parse_scalar(const std::string& text, int sign, const std::string& path) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const auto p = s.find("sqrt(");
  if (p == std::string::npos) return Scalar(detail::rational_text(s, path));
  if (s.back() != ')') throw SchemaError(path + ": malformed square root in '" + text + "'");
  const std::string dtext = s.substr(p + 5, s.size() - p - 6);
  if (dtext.empty() || dtext.size() > 12 || !std::all_of(dtext.begin(), dtext.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw SchemaError(path + ": malformed radicand in '" + text + "'");
  const long d = std::stol(dtext);
  std::string head = s.substr(0, p);
  std::size_t k = head.find_last_of("+-");
  std::string a = k == std::string::npos ? "" : head.substr(0, k);
  std::string coeff = k == std::string::npos ? head : head.substr(k);
  Rational b(1);
  if (!coeff.empty() && (coeff[0] == '+' || coeff[0] == '-')) {
    if (coeff[0] == '-') b = -1;
    coeff.erase(0, 1);
  }
  if (!coeff.empty()) {
    if (coeff.back() != '*') throw SchemaError(path + ": expected '*' before sqrt in '" + text + "'");
    coeff.pop_back();
    b *= detail::rational_text(coeff, path);
  }
  Rational ra = a.empty() ? Rational(0) : detail::rational_text(a, path);
  try {
    return Scalar(ra, b, d, sign);
  } catch (const FieldMismatch& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

/// Field access with path-qualified diagnostics.
class Reader {
public:
  explicit Reader(int sign = 1) : sign_(sign) {}

  int sign() const { return sign_; }

  static const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + ": missing field '" + key + "'");
    return *it;
  }

  static std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
  static std::string sub(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

  static long integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
    return j.get<long>();
  }

  static std::size_t count(const json& j, const std::string& path) {
    long v = integer(j, path);
    if (v < 0) throw SchemaError(path + ": expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  static const json& array(const json& j, const std::string& path, std::optional<std::size_t> size = {}) {
    if (!j.is_array()) throw SchemaError(path + ": expected an array");
    if (size && j.size() != *size)
      throw SchemaError(path + ": expected " + std::to_string(*size) + " entries, found " + std::to_string(j.size()));
    return j;
  }

  Scalar scalar(const json& j, const std::string& path) const {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    if (j.is_number()) throw SchemaError(path + ": floating point value where an exact scalar is required");
    if (!j.is_string()) throw SchemaError(path + ": expected a scalar string");
    return parse_scalar(j.get<std::string>(), sign_, path);
  }

  Vec vec(const json& j, std::size_t n, const std::string& path) const {
    array(j, path, n);
    Vec v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(scalar(j[i], sub(path, i)));
    return v;
  }

  Mat mat(const json& j, std::size_t rows, std::size_t cols, const std::string& path) const {
    array(j, path, rows);
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      Vec r = vec(j[i], cols, sub(path, i));
      for (std::size_t c = 0; c < cols; ++c) m(i, c) = r[c];
    }
    return m;
  }

  std::vector<Mat> mats(const json& j, std::size_t n, const std::string& path) const {
    array(j, path);
    std::vector<Mat> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(mat(j[i], n, n, sub(path, i)));
    return out;
  }

  std::map<int, Subspace> pieces(const json& j, std::size_t n, const std::string& path) const {
    array(j, path);
    std::map<int, Subspace> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = sub(path, i);
      long w = integer(field(j[i], "weight", p), sub(p, "weight"));
      const json& rows = array(field(j[i], "basis", p), sub(p, "basis"));
      std::vector<Vec> basis;
      for (std::size_t r = 0; r < rows.size(); ++r) basis.push_back(vec(rows[r], n, sub(sub(p, "basis"), r)));
      if (!out.emplace(static_cast<int>(w), Subspace(n, basis)).second) throw SchemaError(p + ": weight " + std::to_string(w) + " repeated");
    }
    return out;
  }

  Filtration filtration(const json& j, std::size_t n, const std::string& path) const {
    auto steps = pieces(j, n, path);
    try {
      return Filtration(n, steps);
    } catch (const Error& e) {
      throw SchemaError(path + ": " + e.what());
    }
  }

  Splitting splitting(const json& j, std::size_t n, const std::string& path) const {
    auto parts = pieces(j, n, path);
    try {
      return Splitting(n, parts);
    } catch (const Error& e) {
      throw SchemaError(path + ": " + e.what());
    }
  }

  static SharpMonoid monoid(const json& j, const std::string& path) {
    std::size_t rank = count(field(j, "ambient_rank", path), sub(path, "ambient_rank"));
    const std::string gp = sub(path, "generators");
    const json& gens = array(field(j, "generators", path), gp);
    std::vector<std::vector<long>> g;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      array(gens[i], sub(gp, i), rank);
      std::vector<long> row;
      for (std::size_t k = 0; k < rank; ++k) row.push_back(integer(gens[i][k], sub(sub(gp, i), k)));
      g.push_back(row);
    }
    try {
      return SharpMonoid(rank, g);
    } catch (const Error& e) {
      throw SchemaError(path + ": " + e.what());
    }
  }

private:
  int sign_;
};

/// Tracks the embedding of the quadratic scalars written so far.
class Writer {
public:
  json scalar(const Scalar& s) {
    if (!s.is_rational()) {
      if (sign_ && *sign_ != s.embedding_sign()) throw FieldMismatch("document mixes both real embeddings");
      sign_ = s.embedding_sign();
    }
    return s.str();
  }

  json vec(const Vec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(scalar(x));
    return a;
  }

  json mat(const Mat& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i)));
    return a;
  }

  json mats(const std::vector<Mat>& ms) {
    json a = json::array();
    for (const auto& m : ms) a.push_back(mat(m));
    return a;
  }

  json pieces(const std::map<int, Subspace>& p) {
    json a = json::array();
    for (const auto& [w, s] : p) {
      json rows = json::array();
      for (const auto& v : s.basis()) rows.push_back(vec(v));
      a.push_back({{"weight", w}, {"basis", rows}});
    }
    return a;
  }

  json filtration(const Filtration& f) { return pieces(f.steps()); }
  json splitting(const Splitting& s) { return pieces(s.parts()); }

  static json monoid(const SharpMonoid& m) { return {{"ambient_rank", m.rank()}, {"generators", m.generators()}}; }

  /// Adds the format, kind and embedding keys.
  json finish(const std::string& kind, json body) const {
    body["format"] = kFormat;
    body["kind"] = kind;
    if (sign_) body["embedding"] = *sign_ > 0 ? "+" : "-";
    return body;
  }

private:
  std::optional<int> sign_;
};

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

/// Checks the format key, returns the kind and a reader for the document's embedding.
inline std::pair<std::string, Reader> open(const json& doc, const std::string& path = "") {
  if (!doc.is_object()) throw SchemaError((path.empty() ? "document" : path) + ": expected an object");
  const json& f = Reader::field(doc, "format", path.empty() ? "document" : path);
  if (!f.is_string() || f.get<std::string>() != kFormat) throw SchemaError(Reader::sub(path, "format") + ": expected \"" + kFormat + "\"");
  const json& k = Reader::field(doc, "kind", path.empty() ? "document" : path);
  if (!k.is_string()) throw SchemaError(Reader::sub(path, "kind") + ": expected a string");
  int sign = 1;
  if (auto it = doc.find("embedding"); it != doc.end()) {
    if (*it == "+") sign = 1;
    else if (*it == "-") sign = -1;
    else throw SchemaError(Reader::sub(path, "embedding") + ": expected \"+\" or \"-\"");
  }
  return {k.get<std::string>(), Reader(sign)};
}

inline void expect_kind(const std::string& kind, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const char* a : allowed)
    if (kind == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw SchemaError((path.empty() ? "document" : path) + ": kind '" + kind + "' not accepted here (expected " + list + ")");
}

/// Wraps library errors raised while assembling a parsed value.
template <class F>
auto assemble(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError((path.empty() ? "document" : path) + ": " + e.what());
  }
}

// ---- cone actions and log point objects

inline ConeAction read_cone_action(const json& doc, const Reader& r, const std::string& path) {
  auto m = Reader::monoid(Reader::field(doc, "monoid", path), Reader::sub(path, "monoid"));
  std::size_t n = Reader::count(Reader::field(doc, "dimension", path), Reader::sub(path, "dimension"));
  auto w = r.filtration(Reader::field(doc, "weight_filtration", path), n, Reader::sub(path, "weight_filtration"));
  auto ops = r.mats(Reader::field(doc, "nilpotents", path), n, Reader::sub(path, "nilpotents"));
  return assemble(path, [&] { return ConeAction(Cone(m), w, ops); });
}

inline json write_cone_action_fields(const ConeAction& a, Writer& w) {
  return {{"monoid", Writer::monoid(a.cone().monoid())},
          {"dimension", a.dim()},
          {"weight_filtration", w.filtration(a.w())},
          {"nilpotents", w.mats(a.ray_ops())}};
}

inline json write_cone_action(const ConeAction& a) {
  Writer w;
  auto body = write_cone_action_fields(a, w);
  return w.finish("cone-action", body);
}

inline LogPointObject read_logpoint(const json& doc, const Reader& r, const std::string& path) {
  auto a = read_cone_action(doc, r, path);
  const std::size_t n = a.dim();
  auto f = r.mat(Reader::field(doc, "frobenius", path), n, n, Reader::sub(path, "frobenius"));
  auto q = r.scalar(Reader::field(doc, "q", path), Reader::sub(path, "q"));
  auto y = r.splitting(Reader::field(doc, "frobenius_grading", path), n, Reader::sub(path, "frobenius_grading"));
  return assemble(path, [&] { return LogPointObject(a, f, q, y); });
}

inline json write_logpoint(const LogPointObject& o) {
  Writer w;
  auto body = write_cone_action_fields(o.action(), w);
  body["frobenius"] = w.mat(o.frob());
  body["q"] = w.scalar(o.q());
  body["frobenius_grading"] = w.splitting(o.grading());
  return w.finish("logpoint", body);
}

/// A full logpoint document, possibly nested inside another one.
inline LogPointObject read_logpoint_document(const json& doc, const std::string& path) {
  auto [kind, r] = open(doc, path);
  expect_kind(kind, {"logpoint"}, path);
  return read_logpoint(doc, r, path);
}

// ---- filtrations, splittings and monodromy data

inline json write_filtration(const Filtration& f) {
  Writer w;
  json jumps = json::object();
  for (const auto& [wt, s] : f.steps()) jumps[std::to_string(wt)] = s.dim();
  json body{{"dimension", f.ambient()}, {"filtration", w.filtration(f)}, {"jumps", jumps}};
  return w.finish("filtration", body);
}

inline Filtration read_filtration(const json& doc, const Reader& r, const std::string& path) {
  std::size_t n = Reader::count(Reader::field(doc, "dimension", path), Reader::sub(path, "dimension"));
  auto f = r.filtration(Reader::field(doc, "filtration", path), n, Reader::sub(path, "filtration"));
  if (auto it = doc.find("jumps"); it != doc.end()) {
    json expect = json::object();
    for (const auto& [wt, s] : f.steps()) expect[std::to_string(wt)] = s.dim();
    if (*it != expect) throw SchemaError(Reader::sub(path, "jumps") + ": does not match the filtration");
  }
  return f;
}

inline json write_splitting(const Splitting& s) {
  Writer w;
  json body{{"dimension", s.ambient()}, {"splitting", w.splitting(s)}};
  return w.finish("splitting", body);
}

inline Splitting read_splitting(const json& doc, const Reader& r, const std::string& path) {
  std::size_t n = Reader::count(Reader::field(doc, "dimension", path), Reader::sub(path, "dimension"));
  return r.splitting(Reader::field(doc, "splitting", path), n, Reader::sub(path, "splitting"));
}

/// Input of the relative monodromy computation.
struct RmfInput {
  Filtration w;
  Mat n;
};

inline RmfInput read_rmf(const json& doc, const Reader& r, const std::string& path) {
  std::size_t n = Reader::count(Reader::field(doc, "dimension", path), Reader::sub(path, "dimension"));
  return {r.filtration(Reader::field(doc, "weight_filtration", path), n, Reader::sub(path, "weight_filtration")),
          r.mat(Reader::field(doc, "nilpotent", path), n, n, Reader::sub(path, "nilpotent"))};
}

inline json write_rmf(const RmfInput& in) {
  Writer w;
  json body{{"dimension", in.w.ambient()}, {"weight_filtration", w.filtration(in.w)}, {"nilpotent", w.mat(in.n)}};
  return w.finish("rmf", body);
}

/// Input of the Deligne splitting. An absent relative filtration is computed.
struct SplitInput {
  Mat n;
  Filtration w;
  std::optional<Filtration> m;
  Splitting y;
};

inline SplitInput read_split(const json& doc, const Reader& r, const std::string& path) {
  std::size_t n = Reader::count(Reader::field(doc, "dimension", path), Reader::sub(path, "dimension"));
  SplitInput in;
  in.n = r.mat(Reader::field(doc, "nilpotent", path), n, n, Reader::sub(path, "nilpotent"));
  in.w = r.filtration(Reader::field(doc, "weight_filtration", path), n, Reader::sub(path, "weight_filtration"));
  if (doc.contains("relative_filtration"))
    in.m = r.filtration(doc["relative_filtration"], n, Reader::sub(path, "relative_filtration"));
  in.y = r.splitting(Reader::field(doc, "splitting", path), n, Reader::sub(path, "splitting"));
  return in;
}

inline json write_split(const SplitInput& in) {
  Writer w;
  json body{{"dimension", in.w.ambient()}, {"nilpotent", w.mat(in.n)}, {"weight_filtration", w.filtration(in.w)}, {"splitting", w.splitting(in.y)}};
  if (in.m) body["relative_filtration"] = w.filtration(*in.m);
  return w.finish("deligne-split", body);
}

inline DeligneSystem read_system(const json& doc, const Reader& r, const std::string& path) {
  std::size_t n = Reader::count(Reader::field(doc, "dimension", path), Reader::sub(path, "dimension"));
  DeligneSystem s;
  const std::string fp = Reader::sub(path, "filtrations");
  const json& fs = Reader::array(Reader::field(doc, "filtrations", path), fp);
  for (std::size_t i = 0; i < fs.size(); ++i) s.w.push_back(r.filtration(fs[i], n, Reader::sub(fp, i)));
  s.n = r.mats(Reader::field(doc, "nilpotents", path), n, Reader::sub(path, "nilpotents"));
  if (s.w.size() != s.n.size() + 1) throw SchemaError(fp + ": expected one more filtration than nilpotents");
  s.y = r.splitting(Reader::field(doc, "splitting", path), n, Reader::sub(path, "splitting"));
  return s;
}

inline json write_system(const DeligneSystem& s) {
  Writer w;
  json fs = json::array();
  for (const auto& f : s.w) fs.push_back(w.filtration(f));
  json body{{"dimension", s.dim()}, {"filtrations", fs}, {"nilpotents", w.mats(s.n)}, {"splitting", w.splitting(s.y)}};
  return w.finish("deligne-system", body);
}

inline json write_sl2(const SL2Data& d) {
  Writer w;
  json ys = json::array();
  for (const auto& y : d.y) ys.push_back(w.splitting(y));
  json body{{"dimension", d.y.front().ambient()}, {"splittings", ys}, {"nhat", w.mats(d.nhat)}, {"limit", w.mat(d.limit())}};
  return w.finish("sl2-data", body);
}

inline SL2Data read_sl2(const json& doc, const Reader& r, const std::string& path) {
  std::size_t n = Reader::count(Reader::field(doc, "dimension", path), Reader::sub(path, "dimension"));
  SL2Data d;
  const std::string sp = Reader::sub(path, "splittings");
  const json& ys = Reader::array(Reader::field(doc, "splittings", path), sp);
  for (std::size_t i = 0; i < ys.size(); ++i) d.y.push_back(r.splitting(ys[i], n, Reader::sub(sp, i)));
  d.nhat = r.mats(Reader::field(doc, "nhat", path), n, Reader::sub(path, "nhat"));
  if (d.y.size() != d.nhat.size() + 1) throw SchemaError(sp + ": expected one more splitting than operators");
  auto limit = r.mat(Reader::field(doc, "limit", path), n, n, Reader::sub(path, "limit"));
  if (limit != d.limit()) throw SchemaError(Reader::sub(path, "limit") + ": is not the sum of the operators");
  return d;
}

// ---- ratios and boundary setups

/// Face indices and witnesses of a chain descriptor, not yet checked against each other.
struct ChainParts {
  std::vector<std::size_t> chain;
  std::vector<Vec> witnesses;
};

inline ChainParts read_chain_parts(const json& j, const Reader& r, const Cone& c, const std::string& path) {
  const std::string fp = Reader::sub(path, "faces");
  const json& faces = Reader::array(Reader::field(j, "faces", path), fp);
  const json& wit = Reader::array(Reader::field(j, "witnesses", path), Reader::sub(path, "witnesses"), faces.size());
  std::vector<std::size_t> chain;
  std::vector<Vec> ws;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string p = Reader::sub(fp, i);
    Reader::array(faces[i], p);
    std::vector<std::size_t> rays;
    for (std::size_t k = 0; k < faces[i].size(); ++k) {
      std::size_t ray = Reader::count(faces[i][k], Reader::sub(p, k));
      if (ray >= c.rays().size()) throw SchemaError(Reader::sub(p, k) + ": ray index out of range");
      rays.push_back(ray);
    }
    chain.push_back(assemble(p, [&] { return c.face_index(rays); }));
    ws.push_back(r.vec(wit[i], c.rank(), Reader::sub(Reader::sub(path, "witnesses"), i)));
  }
  return {chain, ws};
}

inline RatioPoint read_chain(const json& j, const Reader& r, const Cone& c, const std::string& path) {
  auto parts = read_chain_parts(j, r, c, path);
  return assemble(path, [&] { return RatioPoint(c, parts.chain, parts.witnesses); });
}

inline json write_chain(const RatioPoint& mu, Writer& w) {
  json faces = json::array(), wit = json::array();
  for (std::size_t j = 0; j < mu.length(); ++j) {
    faces.push_back(mu.cone().faces()[mu.chain()[j]].rays);
    wit.push_back(w.vec(mu.witnesses()[j]));
  }
  return {{"faces", faces}, {"witnesses", wit}};
}

inline RatioPoint read_ratio_point(const json& doc, const Reader& r, const std::string& path) {
  Cone c(Reader::monoid(Reader::field(doc, "monoid", path), Reader::sub(path, "monoid")));
  return read_chain(Reader::field(doc, "chain", path), r, c, Reader::sub(path, "chain"));
}

inline json write_ratio_point(const RatioPoint& mu) {
  Writer w;
  json body{{"monoid", Writer::monoid(mu.cone().monoid())}, {"chain", write_chain(mu, w)}};
  return w.finish("ratio-point", body);
}

struct SetupInput {
  LogPointObject object;
  RatioPoint mu;
  std::vector<std::vector<Vec>> lattice_basis;
};

inline SetupInput read_setup(const json& doc, const Reader& r, const std::string& path) {
  auto o = read_logpoint_document(Reader::field(doc, "object", path), Reader::sub(path, "object"));
  auto mu = read_chain(Reader::field(doc, "chain", path), r, o.cone(), Reader::sub(path, "chain"));
  std::vector<std::vector<Vec>> basis;
  if (doc.contains("lattice_basis")) {
    const std::string bp = Reader::sub(path, "lattice_basis");
    const json& b = Reader::array(doc["lattice_basis"], bp, mu.length());
    for (std::size_t j = 0; j < b.size(); ++j) {
      Reader::array(b[j], Reader::sub(bp, j));
      basis.emplace_back();
      for (std::size_t l = 0; l < b[j].size(); ++l) basis.back().push_back(r.vec(b[j][l], o.cone().rank(), Reader::sub(Reader::sub(bp, j), l)));
    }
  }
  return {o, mu, basis};
}

inline json write_setup(const SetupInput& s) {
  Writer w;
  json body{{"object", write_logpoint(s.object)}, {"chain", write_chain(s.mu, w)}};
  if (!s.lattice_basis.empty()) {
    json b = json::array();
    for (const auto& piece : s.lattice_basis) {
      json row = json::array();
      for (const auto& v : piece) row.push_back(w.vec(v));
      b.push_back(row);
    }
    body["lattice_basis"] = b;
  }
  return w.finish("boundary-setup", body);
}

// ---- representations over the elliptic curve

inline EllipticRep read_rep(const json& doc, const Reader& r, const std::string& path) {
  std::size_t n = Reader::count(Reader::field(doc, "dimension", path), Reader::sub(path, "dimension"));
  EllipticRep e;
  e.w = r.filtration(Reader::field(doc, "weight_filtration", path), n, Reader::sub(path, "weight_filtration"));
  e.g0 = r.mat(Reader::field(doc, "gamma0", path), n, n, Reader::sub(path, "gamma0"));
  e.g1 = r.mat(Reader::field(doc, "gamma1", path), n, n, Reader::sub(path, "gamma1"));
  e.g2 = r.mat(Reader::field(doc, "gamma2", path), n, n, Reader::sub(path, "gamma2"));
  e.f = r.mat(Reader::field(doc, "frobenius", path), n, n, Reader::sub(path, "frobenius"));
  e.q = r.scalar(Reader::field(doc, "q", path), Reader::sub(path, "q"));
  e.grading = r.splitting(Reader::field(doc, "frobenius_grading", path), n, Reader::sub(path, "frobenius_grading"));
  if (auto d = rep_defect(e); !d.empty()) throw SchemaError((path.empty() ? "document" : path) + ": not a representation: " + d);
  return e;
}

inline json write_rep(const EllipticRep& e) {
  Writer w;
  json body{{"dimension", e.dim()},       {"weight_filtration", w.filtration(e.w)}, {"gamma0", w.mat(e.g0)},
            {"gamma1", w.mat(e.g1)},      {"gamma2", w.mat(e.g2)},                  {"frobenius", w.mat(e.f)},
            {"q", w.scalar(e.q)},         {"frobenius_grading", w.splitting(e.grading)}};
  return w.finish("elliptic-rep", body);
}

/// Re-emits any data document in canonical form.
inline json normalize(const json& doc) {
  auto [kind, r] = open(doc);
  if (kind == "logpoint") return write_logpoint(read_logpoint(doc, r, ""));
  if (kind == "cone-action") return write_cone_action(read_cone_action(doc, r, ""));
  if (kind == "filtration") return write_filtration(read_filtration(doc, r, ""));
  if (kind == "splitting") return write_splitting(read_splitting(doc, r, ""));
  if (kind == "rmf") return write_rmf(read_rmf(doc, r, ""));
  if (kind == "deligne-split") return write_split(read_split(doc, r, ""));
  if (kind == "deligne-system") return write_system(read_system(doc, r, ""));
  if (kind == "sl2-data") return write_sl2(read_sl2(doc, r, ""));
  if (kind == "ratio-point") return write_ratio_point(read_ratio_point(doc, r, ""));
  if (kind == "boundary-setup") return write_setup(read_setup(doc, r, ""));
  if (kind == "elliptic-rep") return write_rep(read_rep(doc, r, ""));
  throw SchemaError("document: unknown kind '" + kind + "'");
}

}  // namespace mlab::io

#endif  // MLAB_IO_HPP
