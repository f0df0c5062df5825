#include <thread>

#include "einstein/solver.hpp"

namespace einstein {

namespace {

struct SplitMix {
  uint64_t s;
  uint64_t next() {
    uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double u01() { return double(next() >> 11) * 0x1p-53; }
};

struct Problem {
  FlagSpec spec;
  SpaceKind space;
  std::vector<int> blocks;  // block ids with free coefficients (x7 == 1 fixed)
  int nvar = 0;             // log-coeffs + c + log-lambda

  explicit Problem(const FlagSpec& s, SpaceKind sp) : spec(s), space(sp) {
    for (int k : {1, 2, 3, 4, 5, 6, 8})
      if (spec.block_present(k, space)) blocks.push_back(k);
    nvar = int(blocks.size()) + 2;
  }

  MetricParams metric_of(const std::vector<double>& z, double* lambda) const {
    MetricParams m;
    m.space = space;
    for (size_t i = 0; i < blocks.size(); ++i)
      m.coeff_ref(blocks[i]) = std::exp(z[i]);
    m.x7 = 1;
    m.gauge = Gauge{1, 0, z[blocks.size()], 1};
    *lambda = std::exp(z[blocks.size() + 1]);
    return m;
  }

  void residual(const std::vector<double>& z, std::vector<double>& f) const {
    double lambda = 0;
    MetricParams m = metric_of(z, &lambda);
    RicciComponents rc = ricci_closed(spec, m);
    f.clear();
    f.push_back(rc.r0);
    for (int k = 1; k <= 8; ++k)
      if (rc.present[size_t(k)]) f.push_back(rc.r[size_t(k)] - lambda);
  }
};

double max_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

bool newton_run(const Problem& prob, std::vector<double>& z, const NewtonOptions& opt) {
  const int n = prob.nvar;
  std::vector<double> f, f2, zt(z.size());
  prob.residual(z, f);
  if (int(f.size()) != n) return false;  // non-square: unsupported spec
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd F(n);
  int stall = 0;
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    double fn = max_norm(f);
    if (fn < opt.fnorm_tol) return true;
    // central differences once the residual is small: the Jacobian can be
    // singular at bifurcation points and forward noise stalls convergence
    bool central = fn < 1e-8;
    for (int j = 0; j < n; ++j) {
      double h = (central ? 1e-5 : 1e-7) * std::max(1.0, std::abs(z[size_t(j)]));
      zt = z;
      zt[size_t(j)] += h;
      prob.residual(zt, f2);
      if (central) {
        std::vector<double> fm;
        zt[size_t(j)] -= 2 * h;
        prob.residual(zt, fm);
        for (int i = 0; i < n; ++i) J(i, j) = (f2[size_t(i)] - fm[size_t(i)]) / (2 * h);
      } else {
        for (int i = 0; i < n; ++i) J(i, j) = (f2[size_t(i)] - f[size_t(i)]) / h;
      }
    }
    for (int i = 0; i < n; ++i) F(i) = -f[size_t(i)];
    Eigen::VectorXd dz = J.fullPivLu().solve(F);
    if (!dz.allFinite()) return false;
    double step = 1.0;
    bool ok = false;
    for (int h = 0; h < opt.max_halvings; ++h) {
      zt = z;
      for (int j = 0; j < n; ++j) zt[size_t(j)] += step * dz(j);
      bool sane = true;
      for (size_t j = 0; j < prob.blocks.size(); ++j)
        if (std::abs(zt[j]) > 25) sane = false;
      if (sane) {
        prob.residual(zt, f2);
        if (max_norm(f2) < fn) {
          z = zt;
          f = f2;
          ok = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!ok && ++stall > 3) break;
  }
  return max_norm(f) < 1e-11;
}

int worker_count(const NewtonOptions& opt) {
  if (opt.threads > 0) return opt.threads;
  if (const char* env = std::getenv("EINSTEIN_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? int(hc) : 1;
}

}  // namespace

SolveResult solve_generic_newton(const FlagSpec& spec, SpaceKind space,
                                 const NewtonOptions& opts) {
  Problem prob(spec, space);
  SolveResult result;
  result.spec = spec;
  result.space = space;

  auto st = std::make_shared<StructureTensor>(build_structure_tensor(spec));
  RicciBrute engine(st, space);

  struct Hit {
    std::vector<double> z;
    int start;
  };
  std::vector<std::optional<Hit>> hits(size_t(opts.starts));

  auto run_range = [&](int lo, int hi) {
    for (int s = lo; s < hi; ++s) {
      SplitMix rng{opts.seed * 0x9E3779B97F4A7C15ull + uint64_t(s) * 0xD1B54A32D192ED03ull +
                   0x853C49E6748FEA9Bull};
      std::vector<double> z(size_t(prob.nvar));
      for (size_t j = 0; j < prob.blocks.size(); ++j) z[j] = rng.u01() * 4.0 - 2.0;
      z[prob.blocks.size()] = rng.u01() - 0.5;          // c
      z[prob.blocks.size() + 1] = std::log(0.25) + rng.u01() - 0.5;  // lambda
      if (newton_run(prob, z, opts)) hits[size_t(s)] = Hit{z, s};
    }
  };
  int workers = std::min(worker_count(opts), std::max(1, opts.starts));
  if (workers <= 1) {
    run_range(0, opts.starts);
  } else {
    std::vector<std::thread> pool;
    int chunk = (opts.starts + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      int lo = w * chunk, hi = std::min(opts.starts, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  int diverged = 0;
  for (const auto& h : hits)
    if (!h) ++diverged;
  result.stats["starts"] = opts.starts;
  result.stats["diverged"] = diverged;

  for (const auto& h : hits) {
    if (!h) continue;
    double lambda = 0;
    MetricParams m = prob.metric_of(h->z, &lambda);
    if (lambda <= 0) continue;
    double res = engine.certify(m, lambda);
    if (res > 1e-9) continue;
    EinsteinSolution sol;
    sol.spec = spec;
    sol.space = space;
    sol.metric = m;
    sol.lambda = lambda;
    sol.residual = res;
    sol.origin = "newton";
    sol.classification = classify_solution(spec, m);
    result.solutions.push_back(std::move(sol));
  }
  detail::sort_and_dedup(result);
  // collapse residual-level clusters around degenerate solutions: merge two
  // hits only when their midpoint still certifies (distinct isolated
  // solutions fail this)
  {
    auto& sols = result.solutions;
    for (size_t i = 0; i < sols.size(); ++i)
      for (size_t j = i + 1; j < sols.size();) {
        double d = std::abs(sols[i].lambda - sols[j].lambda);
        for (int k = 1; k <= 8; ++k)
          d = std::max(d, std::abs(sols[i].metric.coeff(k) - sols[j].metric.coeff(k)));
        d = std::max(d, std::abs(sols[i].metric.gauge.c - sols[j].metric.gauge.c));
        if (d < 3e-5) {
          MetricParams mid = sols[i].metric;
          for (int k = 1; k <= 8; ++k)
            mid.coeff_ref(k) = 0.5 * (sols[i].metric.coeff(k) + sols[j].metric.coeff(k));
          mid.gauge.c = 0.5 * (sols[i].metric.gauge.c + sols[j].metric.gauge.c);
          double lam_mid = 0.5 * (sols[i].lambda + sols[j].lambda);
          if (engine.certify(mid, lam_mid) < 1e-9) {
            if (sols[j].residual < sols[i].residual) sols[i] = sols[j];
            sols.erase(sols.begin() + long(j));
            continue;
          }
        }
        ++j;
      }
  }
  return result;
}

}  // namespace einstein
