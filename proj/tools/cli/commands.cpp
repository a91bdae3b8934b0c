#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "freestate/boundary.hpp"
#include "freestate/eigenstate.hpp"
#include "freestate/errors.hpp"
#include "freestate/words.hpp"
#include "report.hpp"

namespace freestate::cli {
namespace {

std::string join15(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += fmt15(v[i]);
  }
  return s;
}

PhiFunction state_function(const JobConfig& cfg) {
  if (cfg.mode == StateMode::kOuter) return outer_boundary_function(cfg.c);
  return phi_function(canonical_params(CoefficientVector(cfg.c, *cfg.lambda)));
}

std::string show(const Word& w) { return w.empty() ? "\"\"" : format_word(w); }

}  // namespace

void cmd_invert_s(const std::vector<double>& s, const InvertOptions& opts, std::ostream& out) {
  const TargetPoint q(s);
  if (!in_dn(q)) throw DomainError("(" + join15(s) + ") is not in D_n");
  const auto x = invert_s(q, opts);
  const auto back = apply_s(x);
  double residual = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) residual = std::max(residual, std::abs(back.s(j) - s[j]));
  out << "x = " << join15(x.x()) << "\n"
      << "t = " << fmt15(x.t()) << "\n"
      << "residual = " << fmt15(residual) << "\n";
}

void cmd_spectrum(const std::vector<double>& c, bool universal, std::ostream& out) {
  if (c.empty()) throw ParseError("spectrum needs coefficients");
  for (double v : c) {
    if (!std::isfinite(v)) throw ParseError("coefficients must be finite");
  }
  if (universal) {
    for (double v : c) {
      if (v < 0.0) throw DomainError("universal annulus needs nonnegative coefficients");
    }
  }
  const auto ann = universal ? universal_spectrum(c) : reduced_spectrum(std::span<const double>(c));
  out << (universal ? "universal" : "reduced") << " annulus: [" << fmt15(ann.inner_radius) << ", "
      << fmt15(ann.outer_radius) << "]\n";
}

void cmd_state(const JobConfig& cfg, const std::vector<std::string>& words, std::ostream& out) {
  const auto phi = state_function(cfg);
  std::vector<Word> list;
  if (words.empty()) {
    list = enumerate_words(cfg.n, cfg.max_word_len);
  } else {
    for (const auto& w : words) list.push_back(parse_word(w, cfg.n));
  }
  out << "# word\tpretty\tphi\n";
  for (const auto& w : list) out << show(w) << '\t' << pretty_word(w) << '\t' << fmt15(phi(w)) << '\n';
}

void cmd_gram(const JobConfig& cfg, int k, bool print_matrix, std::ostream& out) {
  if (k < 1) throw ParseError("--k must be >= 1");
  const auto phi = state_function(cfg);
  for (int j = 1; j <= k; ++j) {
    const auto g = gram_direct(phi, cfg.n, j);
    const auto rep = psd_report(g.entries);
    out << "k = " << j << "  size = " << g.entries.rows() << "  min_eigenvalue = "
        << fmt15(rep.min_eigenvalue) << "  " << (rep.pass ? "PSD" : "NOT PSD") << '\n';
    if (print_matrix) {
      for (Eigen::Index r = 0; r < g.entries.rows(); ++r) {
        for (Eigen::Index c = 0; c < g.entries.cols(); ++c) {
          out << (c ? " " : "  ") << fmt15(g.entries(r, c));
        }
        out << '\n';
      }
    }
  }
}

void cmd_boundary(const JobConfig& cfg, const std::vector<std::string>& words, std::ostream& out) {
  if (cfg.mode == StateMode::kOuter) {
    throw DomainError("the boundary model is built for interior lambda only");
  }
  const auto params = canonical_params(CoefficientVector(cfg.c, *cfg.lambda));
  const auto model = make_boundary_model(params);
  const int n = cfg.n;
  std::vector<Letter> letters;
  for (std::size_t slot = 0; slot < 2 * static_cast<std::size_t>(n); ++slot) {
    letters.push_back(Letter::from_slot(slot));
  }
  out << "t = " << fmt15(params.t()) << "\n# beta\n";
  for (auto v : letters) {
    out << pretty_word(Word(n, std::span<const Letter>(&v, 1))) << '\t'
        << fmt15(model.measure.beta_of(v)) << '\n';
  }
  out << "# alpha (row = current letter)\n";
  for (auto from : letters) {
    for (std::size_t k = 0; k < letters.size(); ++k) {
      out << (k ? " " : "") << fmt15(model.measure.alpha_of(from, letters[k]));
    }
    out << '\n';
  }
  out << "# P(u_i, w) by first symbol: own other inverse\n";
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    out << 'u' << i + 1 << '\t' << fmt15(model.table.own[ii]) << ' ' << fmt15(model.table.other[ii])
        << ' ' << fmt15(model.table.inverse_first[ii]) << '\n';
  }
  if (!words.empty()) {
    out << "# word\tintegral of P\tphi\n";
    for (const auto& text : words) {
      const auto w = parse_word(text, n);
      out << show(w) << '\t' << fmt15(integrate_p(model, w)) << '\t' << fmt15(phi_eval(params, w))
          << '\n';
    }
  }
}

}  // namespace freestate::cli
