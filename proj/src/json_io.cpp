#include "sc/json_io.hpp"

#include <set>

namespace sc {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw SchemaError(std::string("missing field '") + name + "'");
  return j.at(name);
}

double number(const Json& j) {
  if (!j.is_number()) throw SchemaError("expected a number");
  return j.get<double>();
}

int integer(const Json& j) {
  if (!j.is_number_integer()) throw SchemaError("expected an integer");
  return j.get<int>();
}

const Json& array(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected an array");
  return j;
}

}  // namespace

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vec_from_json(const Json& j) {
  array(j);
  Vec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = number(j[i]);
  return v;
}

Json mat_to_json(const Mat& m) {
  Json a = Json::array();
  for (int r = 0; r < m.rows(); ++r) a.push_back(vec_to_json(m.row(r).transpose()));
  return a;
}

Mat mat_from_json(const Json& j) {
  array(j);
  if (j.empty()) return Mat(0, 0);
  const size_t cols = array(j[0]).size();
  Mat m(static_cast<int>(j.size()), static_cast<int>(cols));
  for (size_t r = 0; r < j.size(); ++r) {
    if (array(j[r]).size() != cols) throw SchemaError("matrix rows have different lengths");
    for (size_t c = 0; c < cols; ++c) m(static_cast<int>(r), static_cast<int>(c)) = number(j[r][c]);
  }
  return m;
}

Json simplex_to_json(const Simplex& s) {
  Json a = Json::array();
  for (const auto& v : s.v) a.push_back(vec_to_json(v));
  return a;
}

Simplex simplex_from_json(const Json& j) {
  array(j);
  if (j.empty()) throw SchemaError("simplex needs at least one vertex");
  Simplex s;
  for (const auto& v : j) s.v.push_back(vec_from_json(v));
  for (const auto& v : s.v)
    if (v.size() != s.v[0].size()) throw SchemaError("simplex vertices have different dimensions");
  return s;
}

Json chain_to_json(const StressedChain& c) {
  Json terms = Json::array();
  for (const auto& [A, s] : c.terms)
    terms.push_back(Json{{"coefficient", mat_to_json(A)}, {"simplex", simplex_to_json(s)}});
  return Json{{"dim", c.dim}, {"grade", c.grade}, {"terms", terms}};
}

StressedChain chain_from_json(const Json& j) {
  StressedChain c(integer(field(j, "dim")), integer(field(j, "grade")));
  if (c.dim < 1 || c.grade < 0 || c.grade > c.dim) throw SchemaError("stressed_chain: bad dim/grade");
  for (const auto& t : array(field(j, "terms"))) {
    Mat A = mat_from_json(field(t, "coefficient"));
    Simplex s = simplex_from_json(field(t, "simplex"));
    if (A.rows() != c.dim || A.cols() != c.dim) throw SchemaError("stressed_chain: coefficient must be dim x dim");
    if (s.dim() != c.dim || s.k() != c.grade) throw SchemaError("stressed_chain: simplex shape mismatch");
    c.add(A, s);
  }
  return c;
}

Json force_system_to_json(const ForceSystem& f) {
  Json entries = Json::array();
  for (const auto& e : f.entries)
    entries.push_back(Json{{"density", vec_to_json(e.density)}, {"simplex", simplex_to_json(e.simplex)}});
  return Json{{"dim", f.dim}, {"grade", f.grade}, {"entries", entries}};
}

ForceSystem force_system_from_json(const Json& j) {
  ForceSystem f(integer(field(j, "dim")), integer(field(j, "grade")));
  if (f.dim < 1 || f.grade < 0 || f.grade >= f.dim) throw SchemaError("force_system: bad dim/grade");
  for (const auto& e : array(field(j, "entries"))) {
    Vec d = vec_from_json(field(e, "density"));
    Simplex s = simplex_from_json(field(e, "simplex"));
    if (d.size() != f.dim || s.dim() != f.dim || s.k() != f.grade)
      throw SchemaError("force_system: entry shape mismatch");
    f.add(d, s);
  }
  return f;
}

Json ground_structure_to_json(const GroundStructure& g) {
  Json nodes = Json::array(), edges = Json::array(), loads = Json::array(), support = Json::array();
  for (const auto& a : g.nodes) nodes.push_back(vec_to_json(a));
  for (const auto& [i, j] : g.edges) edges.push_back(Json::array({i, j}));
  for (const auto& [node, F] : g.loads) loads.push_back(Json{{"node", node}, {"force", vec_to_json(F)}});
  for (bool s : g.support) support.push_back(s);
  return Json{{"nodes", nodes}, {"edges", edges}, {"loads", loads}, {"support", support}};
}

GroundStructure ground_structure_from_json(const Json& j) {
  GroundStructure g;
  for (const auto& a : array(field(j, "nodes"))) g.nodes.push_back(vec_from_json(a));
  for (const auto& e : array(field(j, "edges"))) {
    if (array(e).size() != 2) throw SchemaError("ground_structure: edges are index pairs");
    g.edges.push_back({integer(e[0]), integer(e[1])});
  }
  if (j.contains("loads"))
    for (const auto& l : array(j.at("loads")))
      g.loads.push_back({integer(field(l, "node")), vec_from_json(field(l, "force"))});
  if (j.contains("support"))
    for (const auto& s : array(j.at("support"))) {
      if (!s.is_boolean()) throw SchemaError("ground_structure: support flags are booleans");
      g.support.push_back(s.get<bool>());
    }
  g.validate();
  return g;
}

Json truss_solution_to_json(const TrussSolution& t) {
  Json res = Json::array();
  for (const auto& [node, r] : t.residuals) res.push_back(Json{{"node", node}, {"residual", vec_to_json(r)}});
  Json lambda = Json::array();
  for (double l : t.lambda) lambda.push_back(l);
  return Json{{"lambda", lambda}, {"mass", t.mass}, {"residuals", res}};
}

TrussSolution truss_solution_from_json(const Json& j) {
  TrussSolution t;
  for (const auto& l : array(field(j, "lambda"))) t.lambda.push_back(number(l));
  t.mass = number(field(j, "mass"));
  if (j.contains("residuals"))
    for (const auto& r : array(j.at("residuals")))
      t.residuals.push_back({integer(field(r, "node")), vec_from_json(field(r, "residual"))});
  return t;
}

Json make_document(const std::string& kind, Json payload) {
  static const std::set<std::string> kinds{"force_system", "stressed_chain", "ground_structure",
                                           "truss_solution", "report"};
  if (!kinds.count(kind)) throw SchemaError("unknown document kind '" + kind + "'");
  return Json{{"version", kDocVersion}, {"kind", kind}, {"payload", std::move(payload)}};
}

std::string document_kind(const Json& doc) {
  const Json& v = field(doc, "version");
  if (!v.is_string() || v.get<std::string>() != kDocVersion) throw SchemaError("unsupported document version");
  const Json& k = field(doc, "kind");
  if (!k.is_string()) throw SchemaError("document kind must be a string");
  field(doc, "payload");
  return k.get<std::string>();
}

const Json& document_payload(const Json& doc, const std::string& expected_kind) {
  const std::string kind = document_kind(doc);
  if (kind != expected_kind) throw SchemaError("expected a " + expected_kind + " document, got " + kind);
  return doc.at("payload");
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sc
