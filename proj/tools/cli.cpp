#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "etacheck/tfinder.hpp"
#include "etacheck/verifier.hpp"

namespace etacheck::cli {

namespace {

std::string join(const std::vector<Cusp>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s;
}

// Left-aligned grid; every column as wide as its widest cell.
std::string grid(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (w.size() <= c) w.push_back(0);
      w[c] = std::max(w[c], r[c].size());
    }
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(w[c] - r[c].size() + 2, ' ');
    }
    os << line << "\n";
  }
  return os.str();
}

std::string order_table_text(const std::string& title, const std::vector<EtaQuotient>& fs,
                             const std::vector<std::string>& names, const EtaQuotient& t) {
  std::vector<i64> ms;
  for (const auto& f : fs) ms.push_back(minimal_power(f, t, 5));
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head = {"x"};
  for (std::size_t c = 0; c < fs.size(); ++c) head.push_back(names[c] + " (m = " + std::to_string(ms[c]) + ")");
  rows.push_back(head);
  for (const auto& [x, row] : order_table(fs, t, 5)) {
    std::vector<std::string> r = {x.to_string()};
    for (std::size_t c = 0; c < row.size(); ++c)
      r.push_back(row[c].slope == 0 ? row[c].constant.get_str()
                                    : row[c].to_string("m") + " = " + row[c].at(ms[c]).get_str());
    rows.push_back(r);
  }
  return title + "\n" + grid(rows);
}

std::string order_list(const EtaQuotient& f) {
  std::vector<std::vector<std::string>> rows = {{"x", "ord"}};
  for (const auto& [x, v] : order_vector(f).entries) rows.push_back({x.to_string(), v.get_str()});
  return grid(rows);
}

struct ModSpec {
  i64 ell = 0;
  int B = 0;
};

ModSpec parse_mod(const std::string& s) {
  const auto caret = s.find('^');
  try {
    if (caret == std::string::npos) throw std::invalid_argument("no caret");
    std::size_t u1 = 0, u2 = 0;
    ModSpec m{std::stoll(s.substr(0, caret), &u1), std::stoi(s.substr(caret + 1), &u2)};
    if (u1 != caret || u2 != s.size() - caret - 1) throw std::invalid_argument("junk");
    return m;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "cli", "u-image", "--mod expects ell^B, e.g. 5^3, got '" + s + "'");
  }
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidInput: return kUsage;
    case ErrorKind::SearchExhausted: return kFail;
    case ErrorKind::ContractViolation: return kContract;
  }
  return kContract;
}

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::SearchExhausted: return "search exhausted";
    case ErrorKind::ContractViolation: return "contract violation";
  }
  return "error";
}

}  // namespace

std::string render_tables() {
  std::ostringstream os;
  const auto c20 = cusp_representatives(20), c100 = cusp_representatives(100);
  os << "Cusps of Gamma0(20): " << join(c20) << "\n";
  os << "Cusps of Gamma0(100): " << join(c100) << "\n\n";

  for (i64 target : {100, 20}) {
    std::vector<std::vector<std::string>> rows = {{"x", "r=0", "r=1", "r=2", "r=3", "r=4"}};
    for (const auto& x : c20) {
      std::vector<std::string> r = {x.to_string()};
      for (i64 k = 0; k < 5; ++k) r.push_back(cusp_image_under_scaling(x, k, 5, target).to_string());
      rows.push_back(r);
    }
    os << "Class of (x + r)/5 in Gamma0(" << target << ")\n"
       << grid(rows) << "\n";
  }

  const EtaQuotient A = build_A(rogers_ramanujan_spec().gen);
  const EtaQuotient T = basis_n20_T();
  os << "Orders of A = " << A.to_string() << " over Gamma0(100)\n" << order_list(A) << "\n";
  os << "Orders of T = " << T.to_string() << " over Gamma0(20)\n" << order_list(T) << "\n";
  os << order_table_text("ord_x of T(5 tau)^m f over Gamma0(100), f = A, T, 1/T", {A, T, T.inverse()}, {"A", "T", "1/T"}, T)
     << "\n";
  os << order_table_text("ord_x of T(5 tau)^m f over Gamma0(100), f = G, H", {basis_n20_G(), basis_n20_H()},
                         {"G", "H"}, T);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eta-quotient toolkit for verifying partition congruence families"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads for searches and image computation")->check(CLI::Range(1, 256));

  i64 cusps_N = 0;
  auto* cusps = app.add_subcommand("cusps", "List representatives of the cusps of Gamma0(N)");
  cusps->add_option("N", cusps_N, "Level")->required()->check(CLI::PositiveNumber);

  std::string eta_text, cusp_text;
  auto* order = app.add_subcommand("order", "Order of an eta quotient at a cusp (all cusps if omitted)");
  order->add_option("eta", eta_text, "Eta quotient N:d^e,...")->required();
  order->add_option("cusp", cusp_text, "Cusp a/c");

  auto* newman = app.add_subcommand("newman", "Check the conditions for an eta quotient to be modular on Gamma0(N)");
  newman->add_option("eta", eta_text, "Eta quotient N:d^e,...")->required();

  std::string spec_text;
  TSearchConfig tcfg;
  auto* findt = app.add_subcommand("find-t", "Search for the Hauptmodul-like t for a family");
  findt->add_option("spec", spec_text, "Built-in name or JSON file")->required();
  findt->add_option("--bound", tcfg.bound, "Exponent bound")->check(CLI::PositiveNumber);
  findt->add_option("--max-order", tcfg.max_n0, "Largest pole order of t to try")->check(CLI::PositiveNumber);

  auto* basis = app.add_subcommand("basis", "Show the algebra basis used for a family");
  basis->add_option("spec", spec_text, "Built-in name or JSON file")->required();

  i64 ui = 0, uj = 0;
  std::size_t uk = 0;
  std::string mod_text, cache_dir;
  auto* uimage = app.add_subcommand("u-image", "Express U_ell(A^i t^j g_k) in the basis");
  uimage->add_option("spec", spec_text, "Built-in name or JSON file")->required();
  uimage->add_option("i", ui, "Power of A (0 or 1)")->required()->check(CLI::Range(0, 1));
  uimage->add_option("j", uj, "Power of t")->required();
  uimage->add_option("k", uk, "Basis index")->required();
  uimage->add_option("--mod", mod_text, "Reduce mod ell^B, written ell^B");
  uimage->add_option("--cache", cache_dir, "Directory for the image cache");

  IterateOptions iopt;
  std::string json_path;
  auto* verify_cmd = app.add_subcommand("verify", "Run the ell-adic iteration and check the conjectured pattern");
  verify_cmd->add_option("spec", spec_text, "Built-in name or JSON file")->required();
  verify_cmd->add_option("--B", iopt.B, "Coefficient cap exponent (default: spec)")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--iterations", iopt.iterations, "Number of steps (default: 2B or B)")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--j-ceiling", iopt.j_ceiling, "Largest |j| allowed in any L_alpha")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--cache", cache_dir, "Directory for the image cache");
  verify_cmd->add_option("--json", json_path, "Write the JSON report here ('-' for stdout)");

  i64 dm = 0, dj = 0, dn = 0;
  int de = 0;
  auto* direct = app.add_subcommand("direct-check", "Test ell^e | a(m n + j) for 0 <= n <= n_max by expansion");
  direct->add_option("spec", spec_text, "Built-in name or JSON file")->required();
  direct->add_option("m", dm, "Modulus")->required()->check(CLI::PositiveNumber);
  direct->add_option("j", dj, "Residue")->required()->check(CLI::NonNegativeNumber);
  direct->add_option("e", de, "Power of ell")->required()->check(CLI::NonNegativeNumber);
  direct->add_option("n_max", dn, "Largest n")->required()->check(CLI::NonNegativeNumber);

  auto* tables = app.add_subcommand("tables", "Print the cusp and order tables for the level 20 case");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*cusps) {
      const auto reps = cusp_representatives(cusps_N);
      out << "Gamma0(" << cusps_N << ") has " << reps.size() << " cusp classes\n" << join(reps) << "\n";
      return kPass;
    }
    if (*order) {
      const auto eq = EtaQuotient::parse(eta_text);
      if (cusp_text.empty()) {
        out << order_list(eq);
      } else {
        const Cusp x = Cusp::parse(cusp_text);
        out << "ord_" << x.to_string() << " = " << eta_order_at_cusp(eq, x).get_str() << "\n";
      }
      return kPass;
    }
    if (*newman) {
      const auto eq = EtaQuotient::parse(eta_text);
      const auto r = newman_check(eq);
      auto yn = [](bool b) { return b ? "yes" : "no"; };
      out << "sum r_d = 0: " << yn(r.sum_zero) << "\n"
          << "sum d r_d = 0 mod 24: " << yn(r.weighted_ok) << "\n"
          << "sum (N/d) r_d = 0 mod 24: " << yn(r.coweighted_ok) << "\n"
          << "prod d^|r_d| is a square: " << yn(r.square_ok) << "\n";
      if (r.valid) out << "modular function on Gamma0(" << eq.level() << ")\n";
      else out << "not a modular function on Gamma0(" << eq.level() << ")\n";
      return r.valid ? kPass : kFail;
    }
    if (*findt) {
      const auto spec = load_spec(spec_text);
      spec.validate();
      tcfg.threads = threads;
      const auto A = build_A(spec.gen);
      const auto ps = compute_pole_sets(A, spec.gen.ell, spec.level());
      out << "A = " << A.to_string() << "\n" << ps.to_string() << "\n";
      const auto w = find_t(ps, tcfg);
      out << "t = " << w.quotient(spec.level()).to_string() << "  (pole order " << w.x1 << " at infinity)\n";
      return kPass;
    }
    if (*basis) {
      const auto spec = load_spec(spec_text);
      const auto b = choose_basis(spec, threads);
      out << b.to_string() << "fingerprint " << b.fingerprint() << "\n";
      const auto bad = basis_violations(b);
      for (const auto& v : bad) out << "violation: " << v << "\n";
      return bad.empty() ? kPass : kFail;
    }
    if (*uimage) {
      const auto spec = load_spec(spec_text);
      std::optional<std::filesystem::path> dir;
      if (!cache_dir.empty()) dir = cache_dir;
      ImageEngine e(choose_basis(spec, threads), build_A(spec.gen), spec.gen.ell, dir);
      if (uk > e.basis().v())
        throw Error(ErrorKind::InvalidInput, "cli", "u-image", "k must be at most " + std::to_string(e.basis().v()));
      if (mod_text.empty()) {
        out << e.image(ui, uj, uk)->to_string() << "\n";
      } else {
        const auto m = parse_mod(mod_text);
        if (m.ell != spec.gen.ell)
          throw Error(ErrorKind::InvalidInput, "cli", "u-image", "--mod prime must be the family's ell");
        CoeffRing::mod_prime_power(m.ell, m.B);
        out << e.image_mod(ui, uj, uk, m.B)->to_string() << "\n";
      }
      return kPass;
    }
    if (*verify_cmd) {
      const auto spec = load_spec(spec_text);
      iopt.threads = threads;
      std::optional<std::filesystem::path> dir;
      if (!cache_dir.empty()) dir = cache_dir;
      const auto rep = verify(spec, iopt, dir);
      if (json_path == "-") {
        out << rep.to_json() << "\n";
      } else {
        out << rep.to_text();
        if (!json_path.empty()) {
          std::ofstream f(json_path);
          if (!(f << rep.to_json() << "\n"))
            throw Error(ErrorKind::InvalidInput, "cli", "verify", "cannot write " + json_path);
        }
      }
      return rep.passed ? kPass : kFail;
    }
    if (*direct) {
      const auto spec = load_spec(spec_text);
      const auto r = direct_oracle(spec.gen, dm, dj, spec.gen.ell, de, dn);
      if (r.holds) {
        out << spec.gen.ell << "^" << de << " divides a(" << dm << "n+" << dj << ") for 0 <= n <= " << dn << "\n";
        return kPass;
      }
      out << "counterexample: n = " << *r.counterexample << ", a(" << dm * *r.counterexample + dj
          << ") = " << r.value.get_str() << " is not divisible by " << spec.gen.ell << "^" << de << "\n";
      return kFail;
    }
    if (*tables) {
      out << render_tables();
      return kPass;
    }
  } catch (const Error& e) {
    err << "error (" << kind_name(e.kind()) << ") " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error (internal) " << e.what() << "\n";
    return kContract;
  }
  return kUsage;
}

}  // namespace etacheck::cli
