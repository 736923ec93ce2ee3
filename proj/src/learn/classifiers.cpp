#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "stylo/error.hpp"
#include "stylo/learn.hpp"
#include "stylo/rng.hpp"

namespace stylo::learn {

namespace {

struct KindName {
  ClassifierKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ClassifierKind::ridge, "ridge"},
    {ClassifierKind::bernoulli_nb, "bernoulli_nb"},
    {ClassifierKind::multinomial_nb, "multinomial_nb"},
    {ClassifierKind::nearest_centroid, "nearest_centroid"},
    {ClassifierKind::linear_svm, "linear_svm"},
    {ClassifierKind::svm_rbf, "svm_rbf"},
    {ClassifierKind::maxent, "maxent"},
    {ClassifierKind::sgd_hinge, "sgd_hinge"},
};

bool is_nb(ClassifierKind k) { return k == ClassifierKind::bernoulli_nb || k == ClassifierKind::multinomial_nb; }
bool standardizes(ClassifierKind k) { return !is_nb(k) && k != ClassifierKind::nearest_centroid; }

Matrix internal(const Model& m, const Matrix& x) {
  require(x.cols() == m.input_dim, ErrorCode::dimension_mismatch,
          "model expects " + std::to_string(m.input_dim) + " features, got " + std::to_string(x.cols()));
  for (double v : x.data()) require(std::isfinite(v), ErrorCode::numeric, "features contain NaN or infinity");
  Matrix z = x;
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) z(i, j) = (z(i, j) - m.mean[j]) / m.scale[j];
  if (m.pca) z = projection::transform(*m.pca, z);
  return z;
}

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d += (a[j] - b[j]) * (a[j] - b[j]);
  return std::exp(-gamma * d);
}

// Full-batch Pegasos in dual form: w = sum_i a_i phi(x_i), so margins are
// K a and the ball projection uses a^T K a. Step 1/(lambda t).
std::vector<double> pegasos_dual(const Matrix& k, const std::vector<double>& y, double lambda, int epochs) {
  const std::size_t n = y.size();
  std::vector<double> a(n, 0.0), margin(n, 0.0);
  const double radius2 = 1.0 / lambda;
  for (int t = 1; t <= epochs; ++t) {
    const double eta = 1.0 / (lambda * t);
    const double shrink = 1.0 - 1.0 / t;
    std::vector<double> step(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (y[i] * margin[i] < 1.0) step[i] = eta * y[i] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = shrink * a[i] + step[i];
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      margin[i] = dot(k.row(i), a);
      norm2 += a[i] * margin[i];
    }
    if (norm2 > radius2) {
      const double s = std::sqrt(radius2 / norm2);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] *= s;
        margin[i] *= s;
      }
    }
  }
  return a;
}

KernelMachine train_machine(const Matrix& z, const std::vector<std::size_t>& rows, const std::vector<double>& y,
                            bool linear, double gamma, const Hyperparams& hp) {
  const Matrix sub = z.select_rows(rows);
  const std::size_t n = rows.size();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      k(i, j) = k(j, i) = (linear ? dot(sub.row(i), sub.row(j)) : rbf(sub.row(i), sub.row(j), gamma)) + 1.0;
  const auto a = pegasos_dual(k, y, hp.svm_lambda, hp.svm_epochs);
  KernelMachine m;
  if (linear) {
    m.weights.assign(sub.cols(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < sub.cols(); ++j) m.weights[j] += a[i] * sub(i, j);
      m.bias += a[i];
    }
    return m;
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != 0.0) keep.push_back(i);
  m.support = sub.select_rows(keep);
  for (std::size_t i : keep) m.coef.push_back(a[i]);
  return m;
}

double machine_score(const KernelMachine& m, std::span<const double> z, bool linear, double gamma) {
  if (linear) return dot(m.weights, z) + m.bias;
  double s = 0.0;
  for (std::size_t i = 0; i < m.coef.size(); ++i) s += m.coef[i] * (rbf(m.support.row(i), z, gamma) + 1.0);
  return s;
}

// Largest eigenvalue of a PSD matrix by power iteration, padded upward.
double top_eigenvalue(const Matrix& a) {
  std::vector<double> v(a.rows(), 1.0), w(a.rows());
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    for (std::size_t i = 0; i < a.rows(); ++i) w[i] = dot(a.row(i), v);
    const double n = norm2(w);
    if (n == 0.0) return 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / n;
    lambda = n;
  }
  return 1.1 * lambda;
}

// Multinomial logistic regression by Nesterov-accelerated gradient descent.
// Primal when features <= samples, otherwise in the span of the samples
// (W = A Z), which gives the same iterates at n x n cost.
void fit_maxent(Model& m, const Matrix& z, const std::vector<std::size_t>& y) {
  const std::size_t n = z.rows(), d = z.cols(), c = m.labels.size();
  const bool dual = d > n;
  const Matrix f = dual ? gram_rows(z) : z;  // n x q
  const std::size_t q = f.cols();
  const double l2 = m.params.maxent_l2;

  // Softmax curvature is at most 1/2, so L <= lambda_max([Z 1]^T [Z 1]) / 2n.
  const Matrix za = z.hconcat(Matrix(n, 1, 1.0));
  const Matrix aug = d + 1 <= n ? gram_columns(za) : gram_rows(za);
  const double lip = 0.5 * top_eigenvalue(aug) / static_cast<double>(n) + l2;
  const double eta = 1.0 / lip;

  Matrix theta(c, q), theta_prev(c, q), look(c, q);
  std::vector<double> b(c, 0.0), b_prev(c, 0.0), b_look(c, 0.0);
  Matrix resid(n, c);
  for (int it = 1; it <= m.params.maxent_iterations; ++it) {
    const double mom = (it - 1.0) / (it + 2.0);
    for (std::size_t i = 0; i < look.data().size(); ++i)
      look.data()[i] = theta.data()[i] + mom * (theta.data()[i] - theta_prev.data()[i]);
    for (std::size_t k = 0; k < c; ++k) b_look[k] = b[k] + mom * (b[k] - b_prev[k]);

    const Matrix s = multiply_bt(f, look);  // n x c
    for (std::size_t i = 0; i < n; ++i) {
      double mx = -INFINITY;
      for (std::size_t k = 0; k < c; ++k) mx = std::max(mx, s(i, k) + b_look[k]);
      double sum = 0.0;
      for (std::size_t k = 0; k < c; ++k) sum += resid(i, k) = std::exp(s(i, k) + b_look[k] - mx);
      for (std::size_t k = 0; k < c; ++k) resid(i, k) = resid(i, k) / sum - (y[i] == k ? 1.0 : 0.0);
    }
    theta_prev = theta;
    b_prev = b;
    double change = 0.0, size = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      auto row = theta.row(k);
      const auto lrow = look.row(k);
      std::vector<double> g(q, 0.0);
      double gb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = resid(i, k) / static_cast<double>(n);
        gb += r;
        if (dual) g[i] += r;
        else
          for (std::size_t j = 0; j < q; ++j) g[j] += r * f(i, j);
      }
      for (std::size_t j = 0; j < q; ++j) row[j] = lrow[j] - eta * (g[j] + l2 * lrow[j]);
      b[k] = b_look[k] - eta * gb;
      for (std::size_t j = 0; j < q; ++j) {
        change = std::max(change, std::abs(row[j] - theta_prev(k, j)));
        size = std::max(size, std::abs(row[j]));
      }
      change = std::max(change, std::abs(b[k] - b_prev[k]));
      size = std::max(size, std::abs(b[k]));
    }
    if (change <= m.params.maxent_tol * std::max(1.0, size)) break;
  }
  m.weights = dual ? multiply(theta, z) : theta;
  m.bias = b;
}

void fit_ridge(Model& m, const Matrix& z, const std::vector<std::size_t>& y) {
  const std::size_t n = z.rows(), d = z.cols(), c = m.labels.size();
  Matrix targets(n, c, -1.0);
  for (std::size_t i = 0; i < n; ++i) targets(i, y[i]) = 1.0;
  // z is column-centered, so the intercept is the target mean.
  m.bias = column_means(targets);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < c; ++k) targets(i, k) -= m.bias[k];
  const double alpha = m.params.ridge_alpha;
  if (d <= n) {
    Matrix a = gram_columns(z);
    for (std::size_t j = 0; j < d; ++j) a(j, j) += alpha;
    const Matrix w = cholesky_solve(a, multiply(z.transposed(), targets));  // d x c
    m.weights = w.transposed();
  } else {
    Matrix a = gram_rows(z);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += alpha;
    const Matrix dual = cholesky_solve(a, targets);  // n x c
    m.weights = multiply(dual.transposed(), z);
  }
}

void fit_sgd(Model& m, const Matrix& z, const std::vector<std::size_t>& y, std::uint64_t seed) {
  const std::size_t n = z.rows(), d = z.cols(), c = m.labels.size();
  const double lambda = m.params.sgd_lambda, radius = 1.0 / std::sqrt(lambda);
  m.weights = Matrix(c, d);
  m.bias.assign(c, 0.0);
  std::vector<std::vector<std::size_t>> orders;
  for (int e = 0; e < m.params.sgd_epochs; ++e) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(e)));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    shuffle(order, rng);
    orders.push_back(std::move(order));
  }
  std::vector<double> xnorm2(n);
  for (std::size_t i = 0; i < n; ++i) xnorm2[i] = dot(z.row(i), z.row(i)) + 1.0;
  // Pegasos with w = s * v (the last coordinate of v is the bias weight).
  for (std::size_t k = 0; k < c; ++k) {
    std::vector<double> v(d + 1, 0.0);
    double s = 1.0, vnorm2 = 0.0;
    std::size_t t = 0;
    for (const auto& order : orders) {
      for (std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const double yi = y[i] == k ? 1.0 : -1.0;
        const auto x = z.row(i);
        const double vx = dot(std::span<const double>(v.data(), d), x) + v[d];
        const double margin = s * vx;
        s *= 1.0 - 1.0 / static_cast<double>(t);
        if (s == 0.0) {
          std::fill(v.begin(), v.end(), 0.0);
          s = 1.0;
          vnorm2 = 0.0;
        }
        if (yi * margin < 1.0) {
          const double step = eta * yi / s;
          const double vx_now = t == 1 ? 0.0 : vx;
          vnorm2 += 2.0 * step * vx_now + step * step * xnorm2[i];
          for (std::size_t j = 0; j < d; ++j) v[j] += step * x[j];
          v[d] += step;
        }
        const double wn = s * std::sqrt(std::max(vnorm2, 0.0));
        if (wn > radius) s *= radius / wn;
      }
    }
    for (std::size_t j = 0; j < d; ++j) m.weights(k, j) = s * v[j];
    m.bias[k] = s * v[d];
  }
}

}  // namespace

const char* to_string(ClassifierKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "?";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
  for (const auto& e : kKinds)
    if (name == e.name) return e.kind;
  fail(ErrorCode::invalid_argument, "unknown classifier \"" + std::string(name) + "\"");
}

std::vector<ClassifierKind> all_classifier_kinds() {
  std::vector<ClassifierKind> out;
  for (const auto& e : kKinds) out.push_back(e.kind);
  return out;
}

bool is_linear(ClassifierKind k) {
  return k == ClassifierKind::ridge || k == ClassifierKind::linear_svm || k == ClassifierKind::maxent ||
         k == ClassifierKind::sgd_hinge;
}

Model train(ClassifierKind kind, const Matrix& x, const std::vector<std::string>& labels, const Hyperparams& hp,
            std::uint64_t seed) {
  require(labels.size() == x.rows(), ErrorCode::dimension_mismatch, "train: one label per sample required");
  require(x.cols() > 0, ErrorCode::precondition, "train: no features");
  for (double v : x.data()) require(std::isfinite(v), ErrorCode::numeric, "features contain NaN or infinity");
  Model m;
  m.kind = kind;
  m.params = hp;
  m.seed = seed;
  m.input_dim = x.cols();
  const std::set<std::string> distinct(labels.begin(), labels.end());
  m.labels.assign(distinct.begin(), distinct.end());
  require(m.labels.size() >= 2, ErrorCode::precondition, "train needs at least two classes");
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < m.labels.size(); ++k) index[m.labels[k]] = k;
  std::vector<std::size_t> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) y[i] = index[labels[i]];

  const std::size_t n = x.rows(), p = x.cols(), c = m.labels.size();
  m.mean.assign(p, 0.0);
  m.scale.assign(p, 1.0);
  if (standardizes(kind)) {
    m.mean = column_means(x);
    for (std::size_t j = 0; j < p; ++j) {
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - m.mean[j]) * (x(i, j) - m.mean[j]);
      const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
      m.scale[j] = sd > 0.0 ? sd : 1.0;
    }
  }
  if (hp.pca_components > 0) {
    require(!is_nb(kind), ErrorCode::precondition, "naive Bayes cannot run on PCA components");
    Matrix u = x;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < p; ++j) u(i, j) = (u(i, j) - m.mean[j]) / m.scale[j];
    m.pca = projection::fit_pca(u, std::min({hp.pca_components, n - 1, p}));
  }
  const Matrix z = internal(m, x);
  const std::size_t d = z.cols();

  switch (kind) {
    case ClassifierKind::ridge:
      fit_ridge(m, z, y);
      break;
    case ClassifierKind::maxent:
      fit_maxent(m, z, y);
      break;
    case ClassifierKind::sgd_hinge:
      fit_sgd(m, z, y, seed);
      break;
    case ClassifierKind::linear_svm:
    case ClassifierKind::svm_rbf: {
      const bool linear = kind == ClassifierKind::linear_svm;
      m.gamma = linear ? 0.0 : (hp.rbf_gamma > 0.0 ? hp.rbf_gamma : 1.0 / static_cast<double>(d));
      for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = a + 1; b < c; ++b) {
          std::vector<std::size_t> rows;
          std::vector<double> target;
          for (std::size_t i = 0; i < n; ++i)
            if (y[i] == a || y[i] == b) {
              rows.push_back(i);
              target.push_back(y[i] == a ? 1.0 : -1.0);
            }
          KernelMachine km = train_machine(z, rows, target, linear, m.gamma, hp);
          km.positive = a;
          km.negative = b;
          m.machines.push_back(std::move(km));
        }
      break;
    }
    case ClassifierKind::nearest_centroid: {
      m.centroids = Matrix(c, d);
      std::vector<double> count(c, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        count[y[i]] += 1.0;
        for (std::size_t j = 0; j < d; ++j) m.centroids(y[i], j) += z(i, j);
      }
      for (std::size_t k = 0; k < c; ++k)
        for (std::size_t j = 0; j < d; ++j) m.centroids(k, j) /= count[k];
      break;
    }
    case ClassifierKind::multinomial_nb:
    case ClassifierKind::bernoulli_nb: {
      for (double v : z.data())
        require(v >= 0.0, ErrorCode::precondition, "naive Bayes needs non-negative features");
      const bool bern = kind == ClassifierKind::bernoulli_nb;
      const double alpha = hp.nb_alpha;
      Matrix sum(c, d);
      std::vector<double> count(c, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        count[y[i]] += 1.0;
        for (std::size_t j = 0; j < d; ++j) sum(y[i], j) += bern ? (z(i, j) > 0.0 ? 1.0 : 0.0) : z(i, j);
      }
      m.log_prob = Matrix(c, d);
      m.log_neg_prob = Matrix(c, d);
      for (std::size_t k = 0; k < c; ++k) {
        m.log_prior.push_back(std::log(count[k] / static_cast<double>(n)));
        double total = 0.0;
        for (std::size_t j = 0; j < d; ++j) total += sum(k, j);
        for (std::size_t j = 0; j < d; ++j) {
          if (bern) {
            const double pk = (sum(k, j) + alpha) / (count[k] + 2.0 * alpha);
            m.log_prob(k, j) = std::log(pk);
            m.log_neg_prob(k, j) = std::log(1.0 - pk);
          } else {
            m.log_prob(k, j) = std::log((sum(k, j) + alpha) / (total + alpha * static_cast<double>(d)));
          }
        }
      }
      break;
    }
  }
  return m;
}

Matrix decision_scores(const Model& m, const Matrix& x) {
  const Matrix z = internal(m, x);
  const std::size_t n = z.rows(), c = m.labels.size();
  switch (m.kind) {
    case ClassifierKind::ridge:
    case ClassifierKind::maxent:
    case ClassifierKind::sgd_hinge: {
      Matrix s = multiply_bt(z, m.weights);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < c; ++k) s(i, k) += m.bias[k];
      return s;
    }
    case ClassifierKind::linear_svm:
    case ClassifierKind::svm_rbf: {
      Matrix s(n, m.machines.size());
      const bool linear = m.kind == ClassifierKind::linear_svm;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < m.machines.size(); ++t) s(i, t) = machine_score(m.machines[t], z.row(i), linear, m.gamma);
      return s;
    }
    case ClassifierKind::nearest_centroid: {
      Matrix s(n, c);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < c; ++k) {
          double d2 = 0.0;
          for (std::size_t j = 0; j < z.cols(); ++j) d2 += std::pow(z(i, j) - m.centroids(k, j), 2);
          s(i, k) = -d2;
        }
      return s;
    }
    case ClassifierKind::multinomial_nb:
    case ClassifierKind::bernoulli_nb: {
      Matrix s(n, c);
      const bool bern = m.kind == ClassifierKind::bernoulli_nb;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < c; ++k) {
          double v = m.log_prior[k];
          for (std::size_t j = 0; j < z.cols(); ++j) {
            if (bern) v += z(i, j) > 0.0 ? m.log_prob(k, j) : m.log_neg_prob(k, j);
            else v += z(i, j) * m.log_prob(k, j);
          }
          s(i, k) = v;
        }
      return s;
    }
  }
  return {};
}

Prediction predict(const Model& m, const Matrix& x) {
  const Matrix raw = decision_scores(m, x);
  const std::size_t n = raw.rows(), c = m.labels.size();
  Prediction p;
  if (m.kind == ClassifierKind::linear_svm || m.kind == ClassifierKind::svm_rbf) {
    p.scores = Matrix(n, c);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t t = 0; t < m.machines.size(); ++t)
        p.scores(i, raw(i, t) >= 0.0 ? m.machines[t].positive : m.machines[t].negative) += 1.0;
  } else {
    p.scores = raw;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < c; ++k)
      if (p.scores(i, k) > p.scores(i, best)) best = k;
    p.labels.push_back(m.labels[best]);
  }
  return p;
}

LinearForm linear_form(const Model& m) {
  require(is_linear(m.kind), ErrorCode::precondition,
          std::string("classifier ") + to_string(m.kind) + " has no linear weights");
  LinearForm f;
  Matrix w;  // rows in the internal space
  if (m.kind == ClassifierKind::linear_svm) {
    w = Matrix(m.machines.size(), m.machines.empty() ? 0 : m.machines[0].weights.size());
    for (std::size_t t = 0; t < m.machines.size(); ++t) {
      std::copy(m.machines[t].weights.begin(), m.machines[t].weights.end(), w.row(t).begin());
      f.bias.push_back(m.machines[t].bias);
      f.names.push_back(m.labels[m.machines[t].positive] + "|" + m.labels[m.machines[t].negative]);
    }
  } else {
    w = m.weights;
    f.bias = m.bias;
    f.names = m.labels;
  }
  // score = W P (D (x - mean) - pca_mean) + b
  Matrix wp = m.pca ? multiply(w, m.pca->components) : w;
  for (std::size_t r = 0; r < wp.rows(); ++r) {
    if (m.pca) f.bias[r] -= dot(wp.row(r), m.pca->means);
    for (std::size_t j = 0; j < wp.cols(); ++j) {
      wp(r, j) /= m.scale[j];
      f.bias[r] -= wp(r, j) * m.mean[j];
    }
  }
  f.weights = std::move(wp);
  return f;
}

}  // namespace stylo::learn
