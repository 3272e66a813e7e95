#include "rateind/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rateind/diagnostics.hpp"

namespace rateind {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::string format_issue(const ValidationIssue& i) {
  std::ostringstream os;
  os << "(" << i.label << ")";
  if (!i.clause.empty()) os << "/" << i.clause;
  os << " " << i.key << ": observed " << i.observed << ", required " << i.required;
  return os.str();
}

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::ostringstream os;
  os << "config violates " << issues.size() << " condition(s)";
  for (const auto& i : issues) os << "\n  " << format_issue(i);
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw ConfigError("key " + key + ": '" + s + "' is not a number");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw ConfigError("key " + key + ": '" + s + "' is not an integer");
  }
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  const long long v = to_integer(key, s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("key " + key + ": '" + s + "' is out of range");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("key " + key + ": '" + s + "' is not a boolean");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s)) out.push_back(to_double(key, item));
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s)) out.push_back(to_int(key, item));
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.lx", [](RunConfig& c, auto& k, auto& v) { c.lx = to_double(k, v); }},
      {"grid.ly", [](RunConfig& c, auto& k, auto& v) { c.ly = to_double(k, v); }},
      {"grid.nx", [](RunConfig& c, auto& k, auto& v) { c.nx = to_int(k, v); }},
      {"grid.ny", [](RunConfig& c, auto& k, auto& v) { c.ny = to_int(k, v); }},
      {"grid.m", [](RunConfig& c, auto& k, auto& v) { c.m = to_int(k, v); }},
      {"energy.kind", [](RunConfig& c, auto&, auto& v) { c.energy_kind = trim(v); }},
      {"energy.gamma", [](RunConfig& c, auto& k, auto& v) { c.gamma = to_double(k, v); }},
      {"energy.q", [](RunConfig& c, auto& k, auto& v) { c.q = to_double(k, v); }},
      {"energy.coeffs", [](RunConfig& c, auto& k, auto& v) { c.coeffs = to_doubles(k, v); }},
      {"energy.growth_c", [](RunConfig& c, auto& k, auto& v) { c.growth_c = to_double(k, v); }},
      {"energy.mu", [](RunConfig& c, auto& k, auto& v) { c.mu = to_double(k, v); }},
      {"dissipation.kind", [](RunConfig& c, auto&, auto& v) { c.dissipation_kind = trim(v); }},
      {"dissipation.c", [](RunConfig& c, auto& k, auto& v) { c.c = to_doubles(k, v); }},
      {"operator.kind", [](RunConfig& c, auto&, auto& v) { c.operator_kind = trim(v); }},
      {"operator.matrix", [](RunConfig& c, auto& k, auto& v) { c.matrix = to_doubles(k, v); }},
      {"operator.epsilon", [](RunConfig& c, auto& k, auto& v) { c.epsilon = to_double(k, v); }},
      {"operator.omega", [](RunConfig& c, auto& k, auto& v) { c.op_omega = to_double(k, v); }},
      {"loading.kind", [](RunConfig& c, auto&, auto& v) { c.loading_kind = trim(v); }},
      {"loading.profile", [](RunConfig& c, auto&, auto& v) { c.profile = trim(v); }},
      {"loading.shape", [](RunConfig& c, auto&, auto& v) { c.shape = trim(v); }},
      {"loading.amplitude", [](RunConfig& c, auto& k, auto& v) { c.amplitude = to_double(k, v); }},
      {"loading.omega", [](RunConfig& c, auto& k, auto& v) { c.load_omega = to_double(k, v); }},
      {"loading.width", [](RunConfig& c, auto& k, auto& v) { c.width = to_double(k, v); }},
      {"loading.direction", [](RunConfig& c, auto& k, auto& v) { c.direction = to_doubles(k, v); }},
      {"loading.times", [](RunConfig& c, auto& k, auto& v) { c.sample_times = to_doubles(k, v); }},
      {"loading.files", [](RunConfig& c, auto&, auto& v) { c.sample_files = split(v); }},
      {"loading.a", [](RunConfig& c, auto& k, auto& v) { c.a = to_double(k, v); }},
      {"loading.p", [](RunConfig& c, auto& k, auto& v) { c.p = to_double(k, v); }},
      {"initial.file", [](RunConfig& c, auto&, auto& v) { c.initial_file = trim(v); }},
      {"time.t_final", [](RunConfig& c, auto& k, auto& v) { c.t_final = to_double(k, v); }},
      {"time.steps", [](RunConfig& c, auto& k, auto& v) { c.steps = to_int(k, v); }},
      {"time.nodes", [](RunConfig& c, auto& k, auto& v) { c.nodes = to_doubles(k, v); }},
      {"solver.tol", [](RunConfig& c, auto& k, auto& v) { c.tol = to_double(k, v); }},
      {"solver.max_iters", [](RunConfig& c, auto& k, auto& v) { c.max_iters = to_int(k, v); }},
      {"solver.tau0", [](RunConfig& c, auto& k, auto& v) { c.tau0 = to_double(k, v); }},
      {"solver.backtrack", [](RunConfig& c, auto& k, auto& v) { c.backtrack = to_double(k, v); }},
      {"solver.accel", [](RunConfig& c, auto& k, auto& v) { c.accel = to_bool(k, v); }},
      {"solver.allow_nonconvex",
       [](RunConfig& c, auto& k, auto& v) { c.allow_nonconvex = to_bool(k, v); }},
      {"diagnostics.alpha", [](RunConfig& c, auto& k, auto& v) { c.alpha = to_double(k, v); }},
      {"diagnostics.el_tests", [](RunConfig& c, auto& k, auto& v) { c.el_tests = to_int(k, v); }},
      {"diagnostics.seed",
       [](RunConfig& c, auto& k, auto& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw ConfigError("key " + k + ": seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"diagnostics.refine", [](RunConfig& c, auto& k, auto& v) { c.refine = to_ints(k, v); }},
      {"diagnostics.time_anchors",
       [](RunConfig& c, auto& k, auto& v) { c.time_anchors = to_int(k, v); }},
      {"diagnostics.max_anchors",
       [](RunConfig& c, auto& k, auto& v) { c.max_anchors = to_int(k, v); }},
      {"diagnostics.metric_pairs",
       [](RunConfig& c, auto& k, auto& v) { c.metric_pairs = to_int(k, v); }},
      {"output.dir", [](RunConfig& c, auto&, auto& v) { c.out_dir = trim(v); }},
      {"output.snapshot_every",
       [](RunConfig& c, auto& k, auto& v) { c.snapshot_every = to_int(k, v); }},
  };
  return table;
}

std::string resolve(const RunConfig& cfg, const std::string& file) {
  const fs::path p(file);
  if (p.is_absolute() || cfg.base_dir.empty()) return p.string();
  return (fs::path(cfg.base_dir) / p).string();
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message(),
                      static_cast<int>(e.line()));
  }
  // Line of the first occurrence of each key, for error messages.
  std::map<std::string, int> lines;
  {
    std::istringstream scan(text);
    std::string line, section;
    int n = 0;
    while (std::getline(scan, line)) {
      ++n;
      const std::string t = trim(line);
      if (t.empty() || t[0] == ';' || t[0] == '#') continue;
      if (t[0] == '[') {
        section = trim(t.substr(1, t.find(']') - 1));
      } else if (const auto eq = t.find('='); eq != std::string::npos) {
        lines.emplace(section + "." + trim(t.substr(0, eq)), n);
      }
    }
  }

  RunConfig cfg;
  cfg.base_dir = base_dir;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError("key '" + section + "' must live inside a [section]", lines[section]);
    }
    for (const auto& [name, value] : body) {
      const std::string key = section + "." + name;
      const auto it = table.find(key);
      const int line = lines.count(key) ? lines[key] : 0;
      if (it == table.end()) throw ConfigError("line " + std::to_string(line) + ": unknown key " + key, line);
      try {
        it->second(cfg, key, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError("line " + std::to_string(line) + ": " + e.what(), line);
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const fs::path parent = fs::path(path).parent_path();
  RunConfig cfg = parse_config(buf.str(), parent.empty() ? "." : parent.string());
  auto issues = validate(cfg);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return cfg;
}

std::string echo(const RunConfig& c) {
  std::ostringstream os;
  os << "[grid]\nlx = " << num(c.lx) << "\nly = " << num(c.ly) << "\nnx = " << c.nx
     << "\nny = " << c.ny << "\nm = " << c.m << "\n\n";
  os << "[energy]\nkind = " << c.energy_kind << "\ngamma = " << num(c.gamma) << "\n";
  if (c.q) os << "q = " << num(*c.q) << "\n";
  if (!c.coeffs.empty()) os << "coeffs = " << join(c.coeffs) << "\n";
  os << "growth_c = " << num(c.growth_c) << "\nmu = " << num(c.mu) << "\n\n";
  os << "[dissipation]\nkind = " << c.dissipation_kind << "\nc = " << join(c.c) << "\n\n";
  os << "[operator]\nkind = " << c.operator_kind << "\n";
  if (!c.matrix.empty()) os << "matrix = " << join(c.matrix) << "\n";
  os << "epsilon = " << num(c.epsilon) << "\nomega = " << num(c.op_omega) << "\n\n";
  os << "[loading]\nkind = " << c.loading_kind << "\nprofile = " << c.profile
     << "\nshape = " << c.shape << "\namplitude = " << num(c.amplitude)
     << "\nomega = " << num(c.load_omega) << "\nwidth = " << num(c.width) << "\n";
  if (!c.direction.empty()) os << "direction = " << join(c.direction) << "\n";
  if (!c.sample_times.empty()) os << "times = " << join(c.sample_times) << "\n";
  if (!c.sample_files.empty()) os << "files = " << join(c.sample_files) << "\n";
  os << "a = " << num(c.a) << "\np = " << num(c.p) << "\n\n";
  if (!c.initial_file.empty()) os << "[initial]\nfile = " << c.initial_file << "\n\n";
  os << "[time]\nt_final = " << num(c.t_final) << "\nsteps = " << c.steps << "\n";
  if (!c.nodes.empty()) os << "nodes = " << join(c.nodes) << "\n";
  os << "\n[solver]\n";
  if (c.tol) os << "tol = " << num(*c.tol) << "\n";
  os << "max_iters = " << c.max_iters << "\ntau0 = " << num(c.tau0)
     << "\nbacktrack = " << num(c.backtrack) << "\naccel = " << (c.accel ? "true" : "false")
     << "\nallow_nonconvex = " << (c.allow_nonconvex ? "true" : "false") << "\n\n";
  os << "[diagnostics]\nalpha = " << num(c.alpha) << "\nel_tests = " << c.el_tests
     << "\nseed = " << c.seed << "\n";
  if (!c.refine.empty()) os << "refine = " << join(c.refine) << "\n";
  os << "time_anchors = " << c.time_anchors << "\nmax_anchors = " << c.max_anchors
     << "\nmetric_pairs = " << c.metric_pairs << "\n\n";
  os << "[output]\ndir = " << c.out_dir << "\nsnapshot_every = " << c.snapshot_every << "\n";
  return os.str();
}

std::vector<ValidationIssue> validate(const RunConfig& c) {
  std::vector<ValidationIssue> out;
  auto issue = [&](std::string label, std::string clause, std::string key, std::string observed,
                   std::string required) {
    out.push_back({std::move(label), std::move(clause), std::move(key), std::move(observed),
                   std::move(required)});
  };

  // Domain and discretization.
  bool grid_ok = true;
  if (!finite_positive(c.lx)) issue("A1", "", "grid.lx", num(c.lx), "finite and > 0"), grid_ok = false;
  if (!finite_positive(c.ly)) issue("A1", "", "grid.ly", num(c.ly), "finite and > 0"), grid_ok = false;
  if (c.nx < 3) issue("A1", "", "grid.nx", std::to_string(c.nx), ">= 3"), grid_ok = false;
  if (c.ny < 3) issue("A1", "", "grid.ny", std::to_string(c.ny), ">= 3"), grid_ok = false;
  const bool m_ok = c.m >= 1 && c.m <= 8;
  if (!m_ok) issue("A1", "", "grid.m", std::to_string(c.m), "1 <= m <= 8");

  // Dissipation.
  try {
    const auto kind = dissipation_kind_from_string(c.dissipation_kind);
    bool ok = !c.c.empty();
    for (const double v : c.c) ok = ok && finite_positive(v);
    if (!ok) {
      issue("A2", "", "dissipation.c", join(c.c), "finite yield values > 0");
    } else if (kind == DissipationKind::euclidean && c.c.size() != 1) {
      issue("A2", "", "dissipation.c", join(c.c), "one value for euclidean");
    } else if (kind == DissipationKind::weighted_l1 && m_ok &&
               static_cast<int>(c.c.size()) != c.m) {
      issue("A2", "", "dissipation.c", std::to_string(c.c.size()) + " values",
            std::to_string(c.m) + " values (one per component)");
    }
  } catch (const std::invalid_argument&) {
    issue("A2", "", "dissipation.kind", c.dissipation_kind, "euclidean | weighted_l1");
  }

  // Operator.
  std::optional<CoeffField> op;
  if (m_ok) {
    try {
      const auto kind = operator_kind_from_string(c.operator_kind);
      const int n = 2 * c.m;
      bool ok = true;
      if (kind != OperatorKind::laplacian) {
        if (static_cast<int>(c.matrix.size()) != n * n) {
          issue("A4", "(7)", "operator.matrix", std::to_string(c.matrix.size()) + " entries",
                std::to_string(n * n) + " entries");
          ok = false;
        } else {
          for (const double v : c.matrix) ok = ok && std::isfinite(v);
          if (!ok) issue("A4", "(7)", "operator.matrix", join(c.matrix), "finite entries");
        }
        if (ok) {
          const double defect = symmetry_defect(c.matrix, n);
          if (defect > 0.0) {
            issue("A4", "(7)", "operator.matrix", "symmetry defect " + num(defect),
                  "A[(a,i),(b,j)] = A[(b,j),(a,i)]");
            ok = false;
          }
        }
        if (ok) {
          const double lam = min_eigenvalue(c.matrix, n);
          if (!(lam > 0.0)) {
            issue("A4", "(8)", "operator.matrix", "kappa = " + num(lam), "kappa > 0");
            ok = false;
          }
        }
      }
      if (kind == OperatorKind::time_modulated) {
        if (!(std::abs(c.epsilon) < 1.0)) {
          issue("A4", "(8)", "operator.epsilon", num(c.epsilon), "|epsilon| < 1");
          ok = false;
        }
        if (!std::isfinite(c.op_omega)) {
          issue("A4", "(7)", "operator.omega", num(c.op_omega), "finite");
          ok = false;
        }
      }
      if (ok) {
        if (kind == OperatorKind::laplacian) {
          op = CoeffField::laplacian(c.m);
        } else if (kind == OperatorKind::constant_anisotropic) {
          op = CoeffField::constant_anisotropic(c.m, c.matrix);
        } else {
          op = CoeffField::time_modulated(c.m, c.matrix, c.epsilon, c.op_omega);
        }
      }
    } catch (const std::invalid_argument& e) {
      issue("A4", "", "operator.kind", c.operator_kind, e.what());
    }
  }

  // Energy, growth and the convexity condition.
  std::optional<EnergySpec> energy;
  try {
    energy = build_energy(c);
    if (c.q && *c.q != energy->q()) {
      issue("A3", "(3)", "energy.q", num(*c.q), num(energy->q()) + " for " + c.energy_kind);
    }
    if (!std::isfinite(energy->growth_constant())) {
      issue("A3", "(3)", "energy.gamma", num(c.gamma), "a finite growth constant (gamma > 0)");
      energy.reset();
    }
  } catch (const std::invalid_argument& e) {
    issue("A3", "(3)", "energy." + std::string(c.energy_kind == "custom_polynomial" ? "coeffs" : "gamma"),
          c.energy_kind == "custom_polynomial" ? join(c.coeffs) : num(c.gamma), e.what());
  }
  if (energy && op && grid_ok && !c.allow_nonconvex) {
    const Grid grid(c.lx, c.ly, c.nx, c.ny);
    const ConvexityCheck cc =
        validate_convexity(*energy, poincare_constant(grid), std::min(1.0, op->kappa()));
    if (!cc.ok) {
      issue("A3", "(9)", "energy.gamma",
            "mu*C_P^2 = " + num(cc.product) + " (mu = " + num(cc.mu) + ", C_P = " +
                num(cc.poincare) + ")",
            "mu*C_P^2 < " + num(cc.threshold));
    }
  }

  // Loading.
  if (!(c.a > 1.0) || !std::isfinite(c.a)) issue("A5", "", "loading.a", num(c.a), "1 < a < inf");
  if (!(c.p >= 2.0) || !std::isfinite(c.p)) issue("A5", "", "loading.p", num(c.p), "2 <= p < inf");
  if (c.loading_kind == "analytic") {
    try {
      time_profile_from_string(c.profile);
    } catch (const std::invalid_argument&) {
      issue("A5", "", "loading.profile", c.profile, "zero | constant | ramp | sine");
    }
    try {
      spatial_shape_from_string(c.shape);
    } catch (const std::invalid_argument&) {
      issue("A5", "", "loading.shape", c.shape, "zero | uniform | sine_bump | gaussian");
    }
    if (!std::isfinite(c.amplitude)) issue("A5", "", "loading.amplitude", num(c.amplitude), "finite");
    if (!std::isfinite(c.load_omega)) issue("A5", "", "loading.omega", num(c.load_omega), "finite");
    if (!finite_positive(c.width)) issue("A5", "", "loading.width", num(c.width), "finite and > 0");
    if (!c.direction.empty() && static_cast<int>(c.direction.size()) != c.m) {
      issue("A5", "", "loading.direction", std::to_string(c.direction.size()) + " entries",
            std::to_string(c.m) + " entries");
    }
  } else if (c.loading_kind == "sampled") {
    if (c.sample_times.size() < 2 || c.sample_times.size() != c.sample_files.size()) {
      issue("A5", "", "loading.times", std::to_string(c.sample_times.size()) + " times, " +
                                            std::to_string(c.sample_files.size()) + " files",
            ">= 2 times with one file each");
    } else {
      for (std::size_t k = 1; k < c.sample_times.size(); ++k) {
        if (!(c.sample_times[k] > c.sample_times[k - 1])) {
          issue("A5", "", "loading.times", join(c.sample_times), "strictly increasing");
          break;
        }
      }
      if (grid_ok && m_ok) {
        const Grid grid(c.lx, c.ly, c.nx, c.ny);
        for (const auto& f : c.sample_files) {
          try {
            const Field s = read_dump(resolve(c, f), c.lx, c.ly);
            if (s.grid() != grid || s.components() != c.m) {
              issue("A5", "", "loading.files", f, "a field on the configured grid with m components");
            }
          } catch (const std::exception& e) {
            issue("A5", "", "loading.files", f, std::string("a readable finite dump: ") + e.what());
          }
        }
      }
    }
  } else {
    issue("A5", "", "loading.kind", c.loading_kind, "analytic | sampled");
  }

  // Initial value.
  if (!c.initial_file.empty() && grid_ok && m_ok) {
    try {
      const Field u0 = read_dump(resolve(c, c.initial_file), c.lx, c.ly);
      if (u0.grid() != Grid(c.lx, c.ly, c.nx, c.ny) || u0.components() != c.m) {
        issue("A6", "", "initial.file", c.initial_file, "a field on the configured grid with m components");
      } else if (energy) {
        double w = 0.0;
        for (int j = 0; j < c.ny; ++j) {
          for (int i = 0; i < c.nx; ++i) w += w0_eval(*energy, u0.node(i, j));
        }
        if (!std::isfinite(w)) issue("A6", "", "initial.file", "W0(u0) = " + num(w), "finite energy");
      }
    } catch (const std::exception& e) {
      issue("A6", "", "initial.file", c.initial_file, std::string("a readable finite dump: ") + e.what());
    }
  }

  // Plumbing.
  if (c.nodes.empty()) {
    if (!finite_positive(c.t_final)) issue("config", "", "time.t_final", num(c.t_final), "> 0");
    if (c.steps < 1) issue("config", "", "time.steps", std::to_string(c.steps), ">= 1");
  } else {
    try {
      TimePartition::from_nodes(c.nodes);
    } catch (const std::invalid_argument& e) {
      issue("config", "", "time.nodes", join(c.nodes), e.what());
    }
  }
  if (c.tol && !finite_positive(*c.tol)) issue("config", "", "solver.tol", num(*c.tol), "> 0");
  if (c.max_iters < 1) issue("config", "", "solver.max_iters", std::to_string(c.max_iters), ">= 1");
  if (!finite_positive(c.tau0)) issue("config", "", "solver.tau0", num(c.tau0), "> 0");
  if (!(c.backtrack > 0.0 && c.backtrack < 1.0)) {
    issue("config", "", "solver.backtrack", num(c.backtrack), "in (0,1)");
  }
  if (!(c.alpha > 0.0 && c.alpha < max_alpha_field(c.p))) {
    issue("config", "", "diagnostics.alpha", num(c.alpha),
          "in (0, " + num(max_alpha_field(c.p)) + ")");
  }
  if (c.el_tests < 0) issue("config", "", "diagnostics.el_tests", std::to_string(c.el_tests), ">= 0");
  for (std::size_t i = 0; i < c.refine.size(); ++i) {
    if (c.refine[i] < 1 || (i > 0 && c.refine[i] != 2 * c.refine[i - 1])) {
      issue("config", "", "diagnostics.refine", join(c.refine), "doubling step counts >= 1");
      break;
    }
  }
  if (c.time_anchors < 1 || c.max_anchors < c.time_anchors) {
    issue("config", "", "diagnostics.max_anchors", std::to_string(c.max_anchors),
          ">= time_anchors >= 1");
  }
  if (c.metric_pairs < 0) {
    issue("config", "", "diagnostics.metric_pairs", std::to_string(c.metric_pairs), ">= 0");
  }
  if (c.snapshot_every < 0) {
    issue("config", "", "output.snapshot_every", std::to_string(c.snapshot_every), ">= 0");
  }
  if (c.out_dir.empty()) issue("config", "", "output.dir", "''", "a directory name");
  return out;
}

Grid build_grid(const RunConfig& c) { return Grid(c.lx, c.ly, c.nx, c.ny); }

EnergySpec build_energy(const RunConfig& c) {
  switch (energy_kind_from_string(c.energy_kind)) {
    case EnergyKind::double_well: return EnergySpec::double_well(c.gamma);
    case EnergyKind::quadratic: return EnergySpec::quadratic(c.gamma);
    case EnergyKind::custom_polynomial:
      return EnergySpec::custom_polynomial(c.coeffs, c.q.value_or(2.0 * (static_cast<double>(c.coeffs.size()) - 1.0)),
                                           c.growth_c, c.mu);
  }
  throw std::invalid_argument("unknown energy kind");
}

DissipationSpec build_dissipation(const RunConfig& c) {
  if (dissipation_kind_from_string(c.dissipation_kind) == DissipationKind::euclidean) {
    if (c.c.size() != 1) throw std::invalid_argument("euclidean dissipation takes one yield value");
    return DissipationSpec::euclidean(c.c.front());
  }
  return DissipationSpec::weighted_l1(c.c);
}

CoeffField build_operator(const RunConfig& c) {
  switch (operator_kind_from_string(c.operator_kind)) {
    case OperatorKind::laplacian: return CoeffField::laplacian(c.m);
    case OperatorKind::constant_anisotropic: return CoeffField::constant_anisotropic(c.m, c.matrix);
    case OperatorKind::time_modulated:
      return CoeffField::time_modulated(c.m, c.matrix, c.epsilon, c.op_omega);
  }
  throw std::invalid_argument("unknown operator kind");
}

Loading build_loading(const RunConfig& c) {
  if (c.loading_kind == "sampled") {
    SampledLoading s;
    s.times = c.sample_times;
    for (const auto& f : c.sample_files) s.samples.push_back(read_dump(resolve(c, f), c.lx, c.ly));
    return Loading(std::move(s), c.a, c.p);
  }
  AnalyticLoading s;
  s.profile = time_profile_from_string(c.profile);
  s.shape = spatial_shape_from_string(c.shape);
  s.amplitude = c.amplitude;
  s.omega = c.load_omega;
  s.width = c.width;
  s.direction = c.direction;
  return Loading(std::move(s), c.a, c.p);
}

TimePartition build_time(const RunConfig& c) {
  return c.nodes.empty() ? TimePartition::uniform(c.t_final, c.steps)
                         : TimePartition::from_nodes(c.nodes);
}

Problem build_problem(const RunConfig& c) {
  const Grid grid = build_grid(c);
  Field u0 = c.initial_file.empty() ? Field(grid, c.m)
                                    : read_dump(resolve(c, c.initial_file), c.lx, c.ly);
  return Problem(grid, build_energy(c), build_dissipation(c), build_operator(c), build_loading(c),
                 std::move(u0), build_time(c), c.allow_nonconvex);
}

SolverConfig build_solver(const RunConfig& c) {
  SolverConfig s;
  s.tol = c.tol;
  s.max_iters = c.max_iters;
  s.tau0 = c.tau0;
  s.backtrack = c.backtrack;
  s.accel = c.accel;
  return s;
}

}  // namespace rateind
