#include "fluxsim/readout_stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fluxsim {

void ShotTable::validate() const {
  if (initial.empty()) throw DomainError("empty shot table");
  if (initial.size() != final.size())
    throw DomainError("initial/final shot count mismatch");
  for (const Shot& s : initial)
    if (!std::isfinite(s.i) || !std::isfinite(s.q))
      throw DomainError("non-finite shot value");
}

void ErrorMatrix::validate() const {
  if (dimension != 2 && dimension != 3)
    throw DomainError("error matrix dimension must be 2 or 3");
  if (e.rows() != dimension || e.cols() != dimension)
    throw DomainError("error matrix shape mismatch");
  for (int j = 0; j < dimension; ++j) {
    double col = 0;
    for (int i = 0; i < dimension; ++i) {
      if (e(i, j) < 0 || e(i, j) > 1)
        throw DomainError("error matrix entries must be probabilities");
      col += e(i, j);
    }
    if (std::abs(col - 1.0) > 1e-12)
      throw DomainError("error matrix columns must sum to 1");
  }
}

ErrorMatrix error_matrix_2state(double p_err) {
  // past 0.5 the matrix is singular and count correction is meaningless
  if (p_err < 0 || p_err >= 0.5)
    throw DomainError("assignment error probability must lie in [0, 0.5)");
  ErrorMatrix m;
  m.dimension = 2;
  m.e.resize(2, 2);
  m.e << 1 - p_err, p_err, p_err, 1 - p_err;
  m.validate();
  return m;
}

ErrorMatrix error_matrix_3state(double p_eg, double p_og, double p_oe) {
  ErrorMatrix m;
  m.dimension = 3;
  m.e.resize(3, 3);
  // columns are true states g, e, o; errors out of |o> are not modeled
  m.e << 1 - p_eg - p_og, p_eg, 0,
         p_eg, 1 - p_eg - p_oe, 0,
         p_og, p_oe, 1;
  m.validate();
  return m;
}

namespace {

struct Histogram {
  std::vector<double> edges;
  std::vector<double> counts;
};

Histogram histogram101(const std::vector<double>& xs) {
  Histogram h;
  auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  double lo = *mn, hi = *mx;
  if (hi <= lo) hi = lo + 1;
  const int bins = 101;
  h.edges.resize(bins + 1);
  h.counts.assign(bins, 0);
  for (int b = 0; b <= bins; ++b)
    h.edges[b] = lo + (hi - lo) * b / double(bins);
  for (double x : xs) {
    int b = std::min(bins - 1,
                     int((x - lo) / (hi - lo) * bins));
    h.counts[std::max(0, b)] += 1;
  }
  return h;
}

// 1D k-means on a vector, deterministic quantile init
std::vector<double> kmeans1d(const std::vector<double>& xs, int k) {
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> centers(k);
  for (int c = 0; c < k; ++c)
    centers[c] = sorted[(sorted.size() - 1) * (2 * c + 1) / (2 * k)];
  std::vector<int> labels(xs.size());
  for (int it = 0; it < 200; ++it) {
    bool moved = false;
    for (size_t i = 0; i < xs.size(); ++i) {
      int best = 0;
      for (int c = 1; c < k; ++c)
        if (std::abs(xs[i] - centers[c]) < std::abs(xs[i] - centers[best]))
          best = c;
      if (labels[i] != best) {
        labels[i] = best;
        moved = true;
      }
    }
    for (int c = 0; c < k; ++c) {
      double sum = 0;
      int cnt = 0;
      for (size_t i = 0; i < xs.size(); ++i)
        if (labels[i] == c) {
          sum += xs[i];
          ++cnt;
        }
      if (cnt > 0) centers[c] = sum / cnt;
    }
    if (!moved) break;
  }
  return centers;
}

}  // namespace

GaussianFit fit_readout_gaussians(const std::vector<Shot>& shots,
                                  int n_components) {
  if (n_components != 2 && n_components != 3)
    throw DomainError("n_components must be 2 or 3");
  if (shots.size() < 1000) throw DomainError("need at least 1000 shots");

  // principal axis of the shot cloud sets the rotation
  double mi = 0, mq = 0;
  for (const Shot& s : shots) {
    mi += s.i;
    mq += s.q;
  }
  mi /= shots.size();
  mq /= shots.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (const Shot& s : shots) {
    sxx += (s.i - mi) * (s.i - mi);
    sxy += (s.i - mi) * (s.q - mq);
    syy += (s.q - mq) * (s.q - mq);
  }
  double theta = 0.5 * std::atan2(2 * sxy, sxx - syy);
  GaussianFit fit;
  fit.rotation = -theta;

  std::vector<double> xs(shots.size()), ys(shots.size());
  double ct = std::cos(fit.rotation), st = std::sin(fit.rotation);
  for (size_t n = 0; n < shots.size(); ++n) {
    xs[n] = ct * shots[n].i - st * shots[n].q;
    ys[n] = st * shots[n].i + ct * shots[n].q;
  }

  // histogram (101 bins) seeds the axis clustering; the refinement below
  // runs on raw shots
  (void)histogram101(xs);
  std::vector<double> cx = kmeans1d(xs, 2);
  std::vector<double> guess_i = {cx[0], cx[1]};
  std::vector<double> guess_q = {0, 0};
  if (n_components == 3) {
    // the third cluster is separated along Q
    std::vector<double> cy = kmeans1d(ys, 2);
    double q_main = std::abs(cy[0]) < std::abs(cy[1]) ? cy[0] : cy[1];
    double q_out = cy[0] + cy[1] - q_main;
    guess_i.push_back((cx[0] + cx[1]) / 2);
    guess_q = {q_main, q_main, q_out};
  }

  // expectation-maximization with a shared isotropic sigma; soft
  // responsibilities let the centers of an unresolved pair collapse onto
  // each other, which hard assignment can never do
  const int nc = n_components;
  const size_t ns = shots.size();
  fit.centers.assign(nc, Shot{});
  fit.weights.assign(nc, 1.0 / nc);
  for (int c = 0; c < nc; ++c) fit.centers[c] = {guess_i[c], guess_q[c]};
  double var0 = 0;
  for (size_t n = 0; n < ns; ++n) {
    double dx = xs[n] - fit.centers[0].i, dy = ys[n] - fit.centers[0].q;
    var0 += dx * dx + dy * dy;
  }
  double sig2 = std::max(1e-300, var0 / (2.0 * ns));
  std::vector<double> resp(nc);
  for (int it = 0; it < 600; ++it) {
    std::vector<double> si(nc, 0), sq(nc, 0), sw(nc, 0);
    double var_sum = 0;
    for (size_t n = 0; n < ns; ++n) {
      double lmax = -1e300;
      for (int c = 0; c < nc; ++c) {
        double dx = xs[n] - fit.centers[c].i;
        double dy = ys[n] - fit.centers[c].q;
        resp[c] = std::log(std::max(fit.weights[c], 1e-300)) -
                  (dx * dx + dy * dy) / (2 * sig2);
        lmax = std::max(lmax, resp[c]);
      }
      double z = 0;
      for (int c = 0; c < nc; ++c) {
        resp[c] = std::exp(resp[c] - lmax);
        z += resp[c];
      }
      for (int c = 0; c < nc; ++c) {
        double r = resp[c] / z;
        si[c] += r * xs[n];
        sq[c] += r * ys[n];
        sw[c] += r;
        double dx = xs[n] - fit.centers[c].i;
        double dy = ys[n] - fit.centers[c].q;
        var_sum += r * (dx * dx + dy * dy);
      }
    }
    double moved = 0;
    for (int c = 0; c < nc; ++c) {
      if (sw[c] < 1e-12) continue;
      Shot next{si[c] / sw[c], sq[c] / sw[c]};
      moved = std::max(moved, std::hypot(next.i - fit.centers[c].i,
                                         next.q - fit.centers[c].q));
      fit.centers[c] = next;
      fit.weights[c] = sw[c] / ns;
    }
    sig2 = std::max(1e-300, var_sum / (2.0 * ns));
    if (moved < 1e-10) break;
  }
  fit.sigma = std::sqrt(sig2);

  // Finite-sample fits of a single Gaussian settle at a spurious split of
  // order n^(-1/4)*sigma, so the degeneracy cut sits well above that floor.
  double sep = std::abs(fit.centers[0].i - fit.centers[1].i);
  if (sep < 0.2 * fit.sigma) fit.degenerate_flag = true;
  if (nc == 3) {
    double qsep = std::abs(fit.centers[2].q -
                           (fit.centers[0].q + fit.centers[1].q) / 2);
    if (qsep < 0.2 * fit.sigma) fit.degenerate_flag = true;
  }
  return fit;
}

double assignment_error_probability(double snr) {
  if (snr < 0) throw DomainError("snr must be nonnegative");
  return 0.5 * (1.0 - std::erf(std::sqrt(snr / 8.0)));
}

CorrectedCounts correct_counts(const Eigen::VectorXd& counts,
                               const ErrorMatrix& em) {
  em.validate();
  if (counts.size() != em.dimension)
    throw DomainError("counts dimension mismatch");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(em.e);
  if (!lu.isInvertible()) throw DomainError("singular error matrix");
  double cond = em.e.norm() * lu.inverse().norm();
  if (cond > 1e6) throw DomainError("error matrix badly conditioned");

  CorrectedCounts out;
  out.values = lu.solve(counts);
  double total = counts.sum();
  bool clipped = false;
  for (int i = 0; i < out.values.size(); ++i)
    if (out.values[i] < 0) {
      out.values[i] = 0;
      clipped = true;
    }
  if (clipped && out.values.sum() > 0)
    out.values *= total / out.values.sum();
  out.clipped_flag = clipped;
  return out;
}

TransitionStats bootstrap_probabilities(
    const std::vector<std::pair<int, int>>& labeled_pairs, int n_states,
    int n_samples, int sample_size, const ErrorMatrix& e_init,
    const ErrorMatrix& e_final, uint64_t seed) {
  if (labeled_pairs.empty()) throw DomainError("no shot pairs");
  if (sample_size > static_cast<int>(labeled_pairs.size()))
    throw DomainError("sample_size exceeds available shots");
  if (e_init.dimension != n_states || e_final.dimension != n_states)
    throw DomainError("error matrix dimension mismatch");

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n_states, n_states);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(n_states, n_states);

  for (int s = 0; s < n_samples; ++s) {
    // seeded per sample index for reproducibility independent of threading
    std::mt19937_64 rng(seed + static_cast<uint64_t>(s));
    std::uniform_int_distribution<size_t> pick(0, labeled_pairs.size() - 1);
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(n_states, n_states);
    for (int n = 0; n < sample_size; ++n) {
      const auto& [i0, f0] = labeled_pairs[pick(rng)];
      joint(f0, i0) += 1;
    }
    // final-readout correction on each observed-initial column, then
    // initial-readout correction across columns (counts mix with E_i^T)
    Eigen::MatrixXd j1(n_states, n_states);
    for (int i0 = 0; i0 < n_states; ++i0)
      j1.col(i0) = correct_counts(joint.col(i0), e_final).values;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(e_init.e);
    Eigen::MatrixXd j2 = j1 * lu.inverse().transpose();
    j2 = j2.cwiseMax(0.0);
    for (int i0 = 0; i0 < n_states; ++i0) {
      Eigen::VectorXd col = j2.col(i0);
      double tot = col.sum();
      if (tot > 0) col /= tot;
      sum.col(i0) += col;
      sum_sq.col(i0) += col.cwiseProduct(col);
    }
  }

  TransitionStats stats;
  stats.mean = sum / n_samples;
  stats.sd = (sum_sq / n_samples - stats.mean.cwiseProduct(stats.mean))
                 .cwiseMax(0.0)
                 .cwiseSqrt();
  return stats;
}

std::vector<std::pair<int, int>> generate_synthetic_labels(
    const Eigen::VectorXd& initial_probs, const Eigen::MatrixXd& transition,
    const ErrorMatrix& e_init, const ErrorMatrix& e_final, int n_shots,
    uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  auto draw = [&](const Eigen::VectorXd& p) {
    double x = u(rng);
    double acc = 0;
    for (int i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (x < acc) return i;
    }
    return static_cast<int>(p.size()) - 1;
  };
  std::vector<std::pair<int, int>> out;
  out.reserve(n_shots);
  for (int s = 0; s < n_shots; ++s) {
    int true_init = draw(initial_probs);
    int obs_init = draw(e_init.e.col(true_init));
    int true_final = draw(transition.col(true_init));
    int obs_final = draw(e_final.e.col(true_final));
    out.emplace_back(obs_init, obs_final);
  }
  return out;
}

std::vector<Shot> generate_gaussian_shots(const std::vector<Shot>& centers,
                                          const std::vector<double>& weights,
                                          double sigma, int n_shots,
                                          uint64_t seed) {
  if (centers.size() != weights.size() || centers.empty())
    throw DomainError("centers/weights mismatch");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0, sigma);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Shot> shots;
  shots.reserve(n_shots);
  for (int s = 0; s < n_shots; ++s) {
    double x = u(rng);
    size_t c = 0;
    double acc = 0;
    for (; c < weights.size(); ++c) {
      acc += weights[c];
      if (x < acc) break;
    }
    if (c == weights.size()) c = weights.size() - 1;
    shots.push_back({centers[c].i + gauss(rng), centers[c].q + gauss(rng)});
  }
  return shots;
}

}  // namespace fluxsim
