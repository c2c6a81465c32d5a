#include "kglab/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "kglab/arcs.hpp"
#include "kglab/error.hpp"
#include "kglab/expsum.hpp"
#include "kglab/local.hpp"
#include "kglab/parallel.hpp"
#include "kglab/report.hpp"
#include "kglab/representations.hpp"
#include "kglab/singular.hpp"
#include "kglab/vaughan.hpp"
#include "kglab/version.hpp"

namespace kglab::cli {
namespace {

using report::json;
using report::num;

struct Common {
  std::string output;
  std::string format;
  bool timing = false;
};

struct Window {
  std::int64_t n = 0;
  int k = 2;
  int s = 5;
  double theta = 0.9;
};

void add_window(CLI::App* sub, Window& w, bool n_required = true) {
  auto* opt = sub->add_option("--n", w.n, "target integer");
  if (n_required) opt->required();
  sub->add_option("--k", w.k, "power")->capture_default_str();
  sub->add_option("--s", w.s, "number of variables")->capture_default_str();
  sub->add_option("--theta", w.theta, "window exponent, y = x^theta")->capture_default_str();
}

json window_config(const Window& w) {
  return {{"n", w.n}, {"k", w.k}, {"s", w.s}, {"theta", num(w.theta)}};
}

WeightFunction parse_weight(const std::string& name) {
  if (name == "unit") return WeightFunction::unit();
  if (name == "prime-indicator") return WeightFunction::prime_indicator();
  if (name == "von-mangoldt") return WeightFunction::von_mangoldt();
  throw InvalidArgument("unknown weight: " + name);
}

struct Range {
  std::int64_t start, stop, step;
};

Range parse_range(const std::string& text) {
  Range r{};
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  if (!(in >> r.start >> c1 >> r.stop >> c2 >> r.step) || c1 != ':' || c2 != ':' ||
      !(in >> std::ws).eof())
    throw InvalidArgument("range must be start:stop:step");
  require(r.step >= 1, "range step must be positive");
  require(r.start <= r.stop, "range start exceeds stop");
  return r;
}

ArcDissection dissection_for(const ShortInterval& I, std::optional<double> delta, double theta) {
  if (!delta) delta = default_delta(I.k, theta);
  require(delta.has_value(), "theta <= 31/40 has no default delta; pass --delta");
  return build_dissection(I, *delta);
}

class Driver {
 public:
  Driver(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"kglab: representations by almost equal prime powers"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--output,-o", common_.output, "report path (default stdout)");
    app.add_option("--format", common_.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--timing", common_.timing, "include elapsed seconds");

    setup_count(app);
    setup_predict(app);
    setup_compare(app);
    setup_dissect(app);
    setup_weyl_scan(app);
    setup_moments(app);
    setup_series(app);
    setup_sieve_check(app);
    setup_vaughan_check(app);

    std::vector<const char*> argv{"kglab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::CallForVersion&) {
      out_ << kVersion << "\n";
      return 0;
    } catch (const CLI::ParseError& e) {
      err_ << "kglab: " << e.what() << "\n";
      return 2;
    }

    try {
      std::string text = action_();
      if (common_.output.empty()) {
        out_ << text;
      } else {
        std::ofstream file(common_.output, std::ios::binary);
        if (!file) throw InvalidArgument("cannot open output file " + common_.output);
        file << text;
        if (!file) throw ResourceError("failed writing " + common_.output);
      }
      return 0;
    } catch (const InvalidArgument& e) {
      err_ << "kglab: invalid configuration: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      err_ << "kglab: error: " << e.what() << "\n";
      return 1;
    }
  }

 private:
  std::string format_or(const char* fallback) const {
    return common_.format.empty() ? fallback : common_.format;
  }

  void require_json(const char* command) const {
    if (format_or("json") != "json")
      throw InvalidArgument(std::string(command) + " emits json only");
  }

  json finish(json env, const std::chrono::steady_clock::time_point& start) const {
    if (common_.timing)
      env["elapsed"] =
          num(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return env;
  }

  static void merge(json& into, const json& from) {
    for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
  }

  void setup_count(CLI::App& app) {
    auto* sub = app.add_subcommand("count", "exact ordered-tuple count R_{k,s}(n)");
    add_window(sub, window_);
    sub->add_option("--method", method_, "meet-in-middle or exhaustive")->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        require_json("count");
        auto r = count_exact(window_.n, window_.k, window_.s, window_.theta,
                             parse_count_method(method_));
        json cfg = window_config(window_);
        cfg["method"] = method_;
        json env = report::envelope("count", cfg);
        merge(env, report::to_json(r, common_.timing));
        return report::dump(env);
      };
    });
  }

  void setup_predict(CLI::App& app) {
    auto* sub = app.add_subcommand("predict", "main-term prediction S(n) J(n) / (log x)^s");
    add_window(sub, window_);
    sub->add_option("--qmax", qmax_, "singular-series truncation")->capture_default_str();
    sub->add_option("--integral", integral_, "fourier-quadrature or density-convolution")
        ->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        require_json("predict");
        const auto start = std::chrono::steady_clock::now();
        auto r = predict_main_term(window_.n, window_.k, window_.s, window_.theta, qmax_,
                                   parse_integral_method(integral_));
        json cfg = window_config(window_);
        cfg["qmax"] = qmax_;
        cfg["integral"] = integral_;
        json env = report::envelope("predict", cfg);
        merge(env, report::to_json(r));
        return report::dump(finish(env, start));
      };
    });
  }

  void setup_compare(CLI::App& app) {
    auto* sub = app.add_subcommand("compare", "count against prediction over an n-range");
    sub->add_option("--range", range_, "start:stop:step, stop inclusive")->required();
    sub->add_option("--k", window_.k)->capture_default_str();
    sub->add_option("--s", window_.s)->capture_default_str();
    sub->add_option("--theta", window_.theta)->capture_default_str();
    sub->add_option("--qmax", qmax_)->capture_default_str();
    sub->add_option("--anomaly-threshold", anomaly_threshold_,
                    "flag rows with R = 0 and prediction above this")
        ->capture_default_str();
    sub->add_flag("--all", include_all_, "include inadmissible n");
    sub->callback([this] { action_ = [this] { return compare(); }; });
  }

  std::string compare() {
    const Range range = parse_range(range_);
    const int k = window_.k, s = window_.s;
    std::vector<std::int64_t> ns;
    for (std::int64_t n = range.start; n <= range.stop; n += range.step)
      if (include_all_ || is_admissible(n, k, s)) ns.push_back(n);

    SingularSeriesTable table(k, s, qmax_);
    struct Row {
      std::int64_t n;
      std::uint64_t R = 0;
      double prediction = 0.0;
      bool admissible = false;
      std::string flag;
    };
    std::vector<Row> rows(ns.size());
    parallel_chunks(ns.size(), [&](std::size_t i) {
      Row& row = rows[i];
      row.n = ns[i];
      row.admissible = is_admissible(row.n, k, s);
      try {
        row.R = count_exact(row.n, k, s, window_.theta).R;
        row.prediction = predict_main_term(row.n, window_.theta, table, k, s, qmax_).prediction;
        row.flag = row.R == 0 && row.prediction > anomaly_threshold_ ? "anomaly" : "ok";
      } catch (const Error& e) {
        row.flag = std::string("error:") + e.what();
      }
    });

    if (format_or("csv") == "csv") {
      std::string text = "n,R,prediction,ratio,admissible,flag\n";
      for (const auto& row : rows) {
        const bool ok = row.flag.rfind("error:", 0) != 0;
        std::string flag = row.flag;
        for (char& c : flag)
          if (c == ',' || c == '\n') c = ';';
        text += std::to_string(row.n) + "," + (ok ? std::to_string(row.R) : "") + "," +
                (ok ? report::fmt15(row.prediction) : "") + "," +
                (ok && row.prediction > 0 ? report::fmt15(row.R / row.prediction) : "") + "," +
                (row.admissible ? "true" : "false") + "," + flag + "\n";
      }
      return text;
    }
    json cfg = {{"range", range_},       {"k", k},
                {"s", s},                {"theta", num(window_.theta)},
                {"qmax", qmax_},         {"anomaly_threshold", num(anomaly_threshold_)},
                {"all", include_all_}};
    json env = report::envelope("compare", cfg);
    json out = json::array();
    for (const auto& row : rows) {
      const bool ok = row.flag.rfind("error:", 0) != 0;
      out.push_back({{"n", row.n},
                     {"R", ok ? json(row.R) : json(nullptr)},
                     {"prediction", ok ? num(row.prediction) : json(nullptr)},
                     {"ratio", ok && row.prediction > 0 ? num(row.R / row.prediction)
                                                        : json(nullptr)},
                     {"admissible", row.admissible},
                     {"flag", row.flag}});
    }
    env["rows"] = std::move(out);
    return report::dump(env);
  }

  void setup_dissect(CLI::App& app) {
    auto* sub = app.add_subcommand("dissect", "major-arc list for the window of n");
    add_window(sub, window_);
    sub->add_option("--delta", delta_, "P = y^delta (default from k and theta)");
    sub->callback([this] {
      action_ = [this] {
        require_json("dissect");
        auto I = build_interval(window_.n, window_.k, window_.s, window_.theta);
        auto D = dissection_for(I, delta_, window_.theta);
        json cfg = window_config(window_);
        cfg["delta"] = delta_ ? num(*delta_) : json(nullptr);
        json env = report::envelope("dissect", cfg);
        env["interval"] = report::to_json(I);
        merge(env, report::to_json(D));
        return report::dump(env);
      };
    });
  }

  void setup_weyl_scan(CLI::App& app) {
    auto* sub = app.add_subcommand("weyl-scan", "sampled |f| over the unit interval");
    add_window(sub, window_);
    sub->add_option("--delta", delta_);
    sub->add_option("--samples", samples_)->capture_default_str();
    sub->add_option("--seed", seed_)->capture_default_str();
    sub->add_option("--weights", weights_, "prime-indicator, von-mangoldt or unit")
        ->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        auto I = build_interval(window_.n, window_.k, window_.s, window_.theta);
        auto D = dissection_for(I, delta_, window_.theta);
        auto scan = weyl_scan(I, D, samples_, parse_weight(weights_), seed_);
        if (format_or("csv") == "csv") return scan.to_csv();
        json cfg = window_config(window_);
        cfg["delta"] = num(D.delta);
        cfg["samples"] = samples_;
        cfg["seed"] = seed_;
        cfg["weights"] = weights_;
        json env = report::envelope("weyl-scan", cfg);
        env["interval"] = report::to_json(I);
        merge(env, report::to_json(scan));
        return report::dump(env);
      };
    });
  }

  void setup_moments(CLI::App& app) {
    auto* sub = app.add_subcommand("moments", "exact 2t-th moment of the window sum");
    add_window(sub, window_, false);
    sub->add_option("--lo", lo_, "window start (with --hi, instead of --n)");
    sub->add_option("--hi", hi_, "window end, inclusive");
    sub->add_option("--t", t_)->capture_default_str();
    sub->add_option("--weights", weights_, "weights for the enumeration side")
        ->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        require_json("moments");
        ShortInterval I;
        json cfg;
        if (lo_ && hi_) {
          I = ShortInterval::from_range(*lo_, *hi_, window_.k);
          cfg = {{"lo", *lo_}, {"hi", *hi_}, {"k", window_.k}};
        } else {
          require(window_.n > 0, "moments needs --n or --lo/--hi");
          I = build_interval(window_.n, window_.k, window_.s, window_.theta);
          cfg = window_config(window_);
        }
        cfg["t"] = t_;
        cfg["weights"] = weights_;
        json env = report::envelope("moments", cfg);
        env["interval"] = report::to_json(I);
        auto dft = moment_dft(I, t_);
        double unit_enum = moment_enum(I, t_, WeightFunction::unit());
        env["dft"] = report::to_json(dft);
        env["enum_unit"] = num(unit_enum);
        env["equal"] = static_cast<double>(dft.value) == unit_enum;
        if (weights_ != "unit") env["enum_weighted"] = num(moment_enum(I, t_, parse_weight(weights_)));
        return report::dump(env);
      };
    });
  }

  void setup_series(CLI::App& app) {
    auto* sub = app.add_subcommand("singular-series", "truncated singular series S(n)");
    sub->add_option("--n", window_.n)->required();
    sub->add_option("--k", window_.k)->capture_default_str();
    sub->add_option("--s", window_.s)->capture_default_str();
    sub->add_option("--qmax", qmax_)->capture_default_str();
    sub->add_flag("--no-direct", no_direct_, "skip the direct sum over q");
    sub->callback([this] {
      action_ = [this] {
        require_json("singular-series");
        auto e = singular_series(window_.n, window_.k, window_.s, qmax_, !no_direct_);
        json cfg = {{"n", window_.n}, {"k", window_.k}, {"s", window_.s}, {"qmax", qmax_},
                    {"direct", !no_direct_}};
        json env = report::envelope("singular-series", cfg);
        env["admissible"] = is_admissible(window_.n, window_.k, window_.s);
        merge(env, report::to_json(e));
        return report::dump(env);
      };
    });
  }

  void setup_sieve_check(CLI::App& app) {
    auto* sub = app.add_subcommand("sieve-check", "vector-sieve checks");
    sub->add_option("--samples", samples_)->capture_default_str();
    sub->add_option("--seed", seed_)->capture_default_str();
    sub->add_option("--n", sieve_n_, "also bound R(n) with toy weights");
    sub->add_option("--k", window_.k)->capture_default_str();
    sub->add_option("--s", window_.s)->capture_default_str();
    sub->add_option("--theta", window_.theta)->capture_default_str();
    sub->add_option("--z", z_, "toy sieve level (default x^0.2)");
    sub->callback([this] {
      action_ = [this] {
        require_json("sieve-check");
        json cfg = {{"samples", samples_}, {"seed", seed_}};
        if (sieve_n_) {
          cfg["n"] = *sieve_n_;
          cfg["k"] = window_.k;
          cfg["s"] = window_.s;
          cfg["theta"] = num(window_.theta);
          cfg["z"] = z_ ? num(*z_) : json(nullptr);
        }
        json env = report::envelope("sieve-check", cfg);
        merge(env, report::to_json(check_vector_sieve_pointwise(samples_, seed_)));
        if (sieve_n_) {
          auto I = build_interval(*sieve_n_, window_.k, window_.s, window_.theta);
          double z = z_ ? *z_ : std::pow(I.x, 0.2);
          auto weights = toy_weights(I, z);
          auto r = vector_sieve_lower(*sieve_n_, window_.k, window_.s, window_.theta,
                                      weights.lower, weights.upper);
          env["toy"] = report::to_json(r);
          env["toy"]["z"] = num(z);
        }
        return report::dump(env);
      };
    });
  }

  void setup_vaughan_check(CLI::App& app) {
    auto* sub = app.add_subcommand("vaughan-check", "bilinear decomposition against f(alpha, Lambda)");
    add_window(sub, window_, false);
    sub->add_option("--x", center_, "window centre (instead of --n)");
    sub->add_option("--X", cut_, "Vaughan cut (default x y^(-1+2 rho))");
    sub->add_option("--samples", vaughan_samples_)->capture_default_str();
    sub->add_option("--seed", seed_)->capture_default_str();
    sub->callback([this] {
      action_ = [this] {
        require_json("vaughan-check");
        ShortInterval I;
        json cfg;
        if (center_) {
          I = ShortInterval::from_center(*center_, window_.theta, window_.k);
          cfg = {{"x", num(*center_)}, {"k", window_.k}, {"theta", num(window_.theta)}};
        } else {
          require(window_.n > 0, "vaughan-check needs --n or --x");
          I = build_interval(window_.n, window_.k, window_.s, window_.theta);
          cfg = window_config(window_);
        }
        const double X = cut_ ? *cut_ : default_vaughan_cut(I);
        cfg["X"] = cut_ ? num(*cut_) : json(nullptr);
        cfg["samples"] = vaughan_samples_;
        cfg["seed"] = seed_;
        auto decomposition = vaughan_decompose(I, X);
        const auto lambda = WeightFunction::von_mangoldt();
        ExpSum f(I, lambda);
        double mass = 0.0;
        for (double v : lambda.values(I)) mass += v;
        std::mt19937_64 rng(seed_);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0, worst_alpha = 0.0;
        for (std::size_t i = 0; i < vaughan_samples_; ++i) {
          Frequency alpha = Frequency::from_double(unit(rng));
          double err = std::abs(decomposition.evaluate(alpha) - f(alpha)) / mass;
          if (err > worst) {
            worst = err;
            worst_alpha = alpha.to_double();
          }
        }
        std::size_t type_two = 0;
        for (const auto& c : decomposition.components) type_two += c.kind == BilinearKind::TypeII;
        json env = report::envelope("vaughan-check", cfg);
        env["interval"] = report::to_json(I);
        env["X"] = num(X);
        env["components"] = decomposition.components.size();
        env["type_ii_components"] = type_two;
        env["max_coefficient_over_tau3"] = num(decomposition.max_coefficient_over_tau3);
        env["lambda_mass"] = num(mass);
        env["max_relative_error"] = num(worst);
        env["argmax_alpha"] = num(worst_alpha);
        return report::dump(env);
      };
    });
  }

  std::ostream& out_;
  std::ostream& err_;
  Common common_;
  std::function<std::string()> action_;

  Window window_;
  std::string method_ = "meet-in-middle";
  std::uint64_t qmax_ = 10'000;
  std::string integral_ = "fourier-quadrature";
  std::string range_;
  double anomaly_threshold_ = 1.0;
  bool include_all_ = false;
  std::optional<double> delta_;
  std::size_t samples_ = 100'000;
  std::uint64_t seed_ = 1;
  std::string weights_ = "prime-indicator";
  std::optional<std::int64_t> lo_, hi_;
  int t_ = 2;
  bool no_direct_ = false;
  std::optional<std::int64_t> sieve_n_;
  std::optional<double> z_;
  std::optional<double> center_;
  std::optional<double> cut_;
  std::size_t vaughan_samples_ = 100;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Driver(out, err).run(args);
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace kglab::cli
