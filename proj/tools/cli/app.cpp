#include "app.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "freestate/errors.hpp"
#include "verify.hpp"

namespace freestate::cli {
namespace {

struct JobFlags {
  std::optional<int> n;
  std::vector<double> c;
  std::optional<double> lambda;
  bool outer = false;
  std::optional<int> max_len;
  std::optional<int> max_len_cap;
  std::optional<std::uint64_t> seed;
  std::string config_path;
};

void add_job_flags(CLI::App* cmd, JobFlags& f) {
  cmd->add_option("--n", f.n, "rank (defaults to the number of coefficients)");
  cmd->add_option("--c", f.c, "coefficients c_i (repeat or list)")->allow_extra_args();
  cmd->add_option("--lambda", f.lambda, "eigenvalue");
  cmd->add_flag("--outer", f.outer, "outer-boundary state, lambda = ||c||");
  cmd->add_option("--max-len", f.max_len, "longest word checked");
  cmd->add_option("--max-len-cap", f.max_len_cap, "safety cap on --max-len");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--config", f.config_path, "JSON config file; flags override it");
}

JobConfig build_config(const JobFlags& f, const std::map<std::string, double>& tols) {
  JobConfig cfg = f.config_path.empty() ? JobConfig{} : load_config_file(f.config_path);
  if (f.n) cfg.n = *f.n;
  if (!f.c.empty()) cfg.c = f.c;
  if (f.lambda) cfg.lambda = *f.lambda;
  if (f.outer) cfg.mode = StateMode::kOuter;
  if (f.max_len) cfg.max_word_len = *f.max_len;
  if (f.max_len_cap) cfg.max_len_cap = *f.max_len_cap;
  if (f.seed) cfg.seed = *f.seed;
  for (const auto& [k, v] : tols) cfg.tolerances[k] = v;
  validate(cfg);
  return cfg;
}

// CLI11 cannot declare a family of --tol.<name> options, so those are taken
// out of the argument list first. Accepts "--tol.name value" and "--tol.name=value".
std::vector<std::string> extract_tolerances(const std::vector<std::string>& args,
                                            std::map<std::string, double>& tols) {
  std::vector<std::string> rest;
  const std::string prefix = "--tol.";
  for (std::size_t k = 0; k < args.size(); ++k) {
    const auto& a = args[k];
    if (a.rfind(prefix, 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string name = a.substr(prefix.size());
    std::string value;
    if (auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name.resize(eq);
    } else {
      if (k + 1 >= args.size()) throw ParseError(a + " needs a value");
      value = args[++k];
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) {
      throw ParseError("tolerance " + name + " is not a number: '" + value + "'");
    }
    tols[name] = v;
  }
  return rest;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback), path_(path) {}
  std::ostream& stream() { return path_.empty() ? fallback_ : buffer_; }
  void flush() {
    if (path_.empty()) return;
    std::ofstream f(path_);
    if (!f) throw ParseError("cannot write '" + path_ + "'");
    f << buffer_.str();
  }

 private:
  std::ostream& fallback_;
  std::string path_;
  std::ostringstream buffer_;
};

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  try {
    std::map<std::string, double> tols;
    auto args = extract_tolerances(raw_args, tols);

    CLI::App app{"Reduced pure eigenstates of sum c_i u_i on the free group"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "write results to this file")->expected(1);

    auto* invert = app.add_subcommand("invert-s", "invert S at a point of D_n");
    std::vector<double> s_values;
    invert->add_option("s", s_values, "coordinates of the target point")->required();
    invert->add_option("--out", out_path, "write results to this file");

    auto* spectrum = app.add_subcommand("spectrum", "annulus radii of sum c_i u_i");
    bool reduced_flag = false, universal_flag = false;
    std::vector<double> spec_c;
    spectrum->add_flag("--reduced", reduced_flag, "reduced C*-algebra annulus (default)");
    spectrum->add_flag("--universal", universal_flag, "annulus valid in every representation");
    spectrum->add_option("coefficients", spec_c, "coefficients c_i");
    spectrum->add_option("--c", spec_c, "coefficients")->allow_extra_args();
    spectrum->add_option("--out", out_path, "write results to this file");

    JobFlags flags;
    std::vector<std::string> words, word_opts;
    int gram_k = 3;
    bool print_matrix = false;

    auto* state = app.add_subcommand("state", "values of phi on words");
    auto* gram = app.add_subcommand("gram", "Gram matrices A_k and their smallest eigenvalues");
    auto* boundary = app.add_subcommand("boundary", "boundary measure, cocycle table and integrals");
    auto* verify = app.add_subcommand("verify", "run every identity check and write a JSON report");
    for (auto* cmd : {state, gram, boundary, verify}) {
      add_job_flags(cmd, flags);
      cmd->add_option("--out", out_path, "write results to this file");
    }
    for (auto* cmd : {state, boundary}) {
      cmd->add_option("--word", word_opts, "word as signed tokens, e.g. \"-2 1\" (repeatable)");
      cmd->add_option("words", words, "words as signed tokens; use -- before ones starting with '-'");
    }
    gram->add_option("--k", gram_k, "largest k")->check(CLI::PositiveNumber);
    gram->add_flag("--print-matrix", print_matrix, "print the matrix entries");

    // CLI11 wants argv order reversed.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands()[0]->help());
        return kExitOk;
      }
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }
    for (auto& w : word_opts) words.push_back(w);

    Sink sink(out_path, out);
    int code = kExitOk;
    if (invert->parsed()) {
      InvertOptions opts;
      if (auto it = tols.find("s_residual"); it != tols.end()) opts.tol = it->second;
      for (const auto& [name, v] : tols) {
        if (name != "s_residual") throw ParseError("invert-s only accepts --tol.s_residual");
      }
      cmd_invert_s(s_values, opts, sink.stream());
    } else if (spectrum->parsed()) {
      if (reduced_flag && universal_flag) throw ParseError("choose one of --reduced and --universal");
      cmd_spectrum(spec_c, universal_flag, sink.stream());
    } else {
      const auto cfg = build_config(flags, tols);
      if (state->parsed()) {
        cmd_state(cfg, words, sink.stream());
      } else if (gram->parsed()) {
        cmd_gram(cfg, gram_k, print_matrix, sink.stream());
      } else if (boundary->parsed()) {
        cmd_boundary(cfg, words, sink.stream());
      } else {
        const auto report = run_verification(cfg);
        sink.stream() << render_report(report, utc_timestamp());
        if (!report.pass()) {
          err << "verification failed:\n";
          for (const auto& f : report.failing()) err << "  " << f << '\n';
          code = kExitVerifyFailed;
        }
      }
    }
    sink.flush();
    return code;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace freestate::cli
