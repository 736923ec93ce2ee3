#include "stylo/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "stylo/error.hpp"
#include "stylo/io.hpp"

namespace stylo::projection {

namespace {

void check_finite(const Matrix& x) {
  for (double v : x.data()) require(std::isfinite(v), ErrorCode::numeric, "projection input is not finite");
}

Matrix centered(const Matrix& x, const std::vector<double>& means) {
  Matrix c = x;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) -= means[j];
  return c;
}

void fix_sign(std::span<double> v) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < v.size(); ++j)
    if (std::abs(v[j]) > std::abs(v[best]) + 1e-12) best = j;
  if (v[best] < 0)
    for (double& x : v) x = -x;
}

// Modified Gram-Schmidt on the rows; a row that collapses is replaced by the
// first standard basis vector outside the span so far.
void orthonormalize(Matrix& rows) {
  const std::size_t p = rows.cols();
  std::size_t next_basis = 0;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    auto v = rows.row(i);
    const double n0 = norm2(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        const double d = dot(v, rows.row(j));
        for (std::size_t c = 0; c < p; ++c) v[c] -= d * rows(j, c);
      }
    }
    double n = norm2(v);
    bool collapsed = n0 == 0.0 || n <= 1e-8 * n0;
    while (collapsed && next_basis < p) {
      std::fill(v.begin(), v.end(), 0.0);
      v[next_basis++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < i; ++j) {
          const double d = dot(v, rows.row(j));
          for (std::size_t c = 0; c < p; ++c) v[c] -= d * rows(j, c);
        }
      }
      n = norm2(v);
      collapsed = n < 1e-8;
    }
    for (double& x : v) x /= n;
  }
}

// Lower-triangular L with a = L L^T.
Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    require(d > 0.0, ErrorCode::numeric, "within-class scatter is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// Columns of the result are L^{-1} b.
Matrix forward_solve(const Matrix& l, const Matrix& b) {
  Matrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t i = 0; i < l.rows(); ++i) {
      double s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
      x(i, c) = s / l(i, i);
    }
  return x;
}

// Columns of the result are L^{-T} b.
Matrix backward_solve_t(const Matrix& l, const Matrix& b) {
  Matrix x = b;
  const std::size_t n = l.rows();
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t i = n; i-- > 0;) {
      double s = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
      x(i, c) = s / l(i, i);
    }
  return x;
}

}  // namespace

const char* to_string(Kind k) { return k == Kind::pca ? "pca" : "lda"; }

Model fit_pca(const Matrix& x, std::size_t k) {
  const std::size_t n = x.rows(), p = x.cols();
  require(n >= 2 && p >= 1, ErrorCode::precondition, "pca needs at least two samples");
  require(k >= 1 && k <= std::min(n - 1, p), ErrorCode::invalid_argument,
          "pca components must be in 1.." + std::to_string(std::min(n - 1, p)));
  check_finite(x);
  Model m;
  m.kind = Kind::pca;
  m.means = column_means(x);
  const Matrix c = centered(x, m.means);
  const double scale = 1.0 / static_cast<double>(n - 1);

  double total = 0.0;
  for (double v : c.data()) total += v * v;
  total *= scale;

  m.components = Matrix(k, p);
  if (p <= n) {
    Matrix cov = gram_columns(c);
    for (double& v : cov.data()) v *= scale;
    const auto eig = symmetric_eigen(cov);
    for (std::size_t i = 0; i < k; ++i) {
      m.eigenvalues.push_back(std::max(0.0, eig.values[i]));
      std::copy(eig.vectors.row(i).begin(), eig.vectors.row(i).end(), m.components.row(i).begin());
    }
  } else {
    Matrix g = gram_rows(c);
    for (double& v : g.data()) v *= scale;
    const auto eig = symmetric_eigen(g);
    for (std::size_t i = 0; i < k; ++i) {
      const double lambda = std::max(0.0, eig.values[i]);
      m.eigenvalues.push_back(lambda);
      // Null directions are left at zero and filled in by orthonormalize().
      if (lambda <= 1e-12 * std::max(eig.values.front(), 0.0) || lambda == 0.0) continue;
      auto row = m.components.row(i);
      for (std::size_t s = 0; s < n; ++s) {
        const double u = eig.vectors(i, s);
        for (std::size_t j = 0; j < p; ++j) row[j] += u * c(s, j);
      }
    }
  }
  orthonormalize(m.components);
  for (std::size_t i = 0; i < k; ++i) {
    fix_sign(m.components.row(i));
    m.explained_variance_ratio.push_back(total > 0.0 ? std::clamp(m.eigenvalues[i] / total, 0.0, 1.0) : 0.0);
  }
  return m;
}

Model fit_pca(const features::FeatureMatrix& fm, std::size_t k) {
  Model m = fit_pca(fm.values, k);
  m.feature_names = fm.feature_names;
  return m;
}

Model fit_lda(const Matrix& x, const std::vector<std::string>& labels, std::size_t k) {
  const std::size_t n = x.rows(), p = x.cols();
  require(labels.size() == n, ErrorCode::dimension_mismatch, "lda: one label per sample required");
  check_finite(x);
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);
  const std::size_t classes = members.size();
  require(classes >= 2, ErrorCode::precondition, "lda needs at least two classes");
  for (const auto& [label, idx] : members)
    require(idx.size() >= 2, ErrorCode::precondition, "lda: class \"" + label + "\" has fewer than two samples");
  if (k == 0) k = classes - 1;
  require(k <= classes - 1, ErrorCode::invalid_argument, "lda components must be <= classes - 1");

  Model m;
  m.kind = Kind::lda;
  m.means = column_means(x);
  for (const auto& [label, _] : members) m.class_labels.push_back(label);

  // The scatter matrices live in the span of the centered samples and the
  // regularized within scatter is lambda*I off it, so solving in an
  // orthonormal basis of that span is exact.
  const Matrix c = centered(x, m.means);
  Matrix basis;  // r x p
  if (p <= n) {
    basis = Matrix::identity(p);
  } else {
    const auto eig = symmetric_eigen(gram_rows(c));
    const double tol = std::max(eig.values.front(), 0.0) * 1e-12;
    std::size_t r = 0;
    while (r < eig.values.size() && eig.values[r] > tol) ++r;
    r = std::max<std::size_t>(r, 1);
    basis = Matrix(r, p);
    for (std::size_t i = 0; i < r; ++i) {
      auto row = basis.row(i);
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t j = 0; j < p; ++j) row[j] += eig.vectors(i, s) * c(s, j);
    }
    orthonormalize(basis);
  }
  const Matrix z = multiply_bt(c, basis);  // n x r
  const std::size_t r = basis.rows();

  Matrix sw(r, r), sb(r, r);
  double trace_w = 0.0;
  for (const auto& [label, idx] : members) {
    std::vector<double> mu(r, 0.0);
    for (std::size_t i : idx)
      for (std::size_t a = 0; a < r; ++a) mu[a] += z(i, a);
    for (double& v : mu) v /= static_cast<double>(idx.size());
    for (std::size_t i : idx)
      for (std::size_t a = 0; a < r; ++a) {
        const double da = z(i, a) - mu[a];
        for (std::size_t b = 0; b < r; ++b) sw(a, b) += da * (z(i, b) - mu[b]);
      }
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) sb(a, b) += static_cast<double>(idx.size()) * mu[a] * mu[b];
  }
  for (std::size_t a = 0; a < r; ++a) trace_w += sw(a, a);
  m.regularization = trace_w > 0.0 ? 1e-6 * trace_w / static_cast<double>(p) : 1e-12;
  for (std::size_t a = 0; a < r; ++a) sw(a, a) += m.regularization;

  // sb v = g sw v  <=>  (L^-1 sb L^-T) w = g w with v = L^-T w.
  const Matrix l = cholesky(sw);
  const Matrix half = forward_solve(l, sb);                     // L^-1 sb
  Matrix sym = forward_solve(l, half.transposed()).transposed();  // L^-1 sb L^-T
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) sym(a, b) = sym(b, a) = 0.5 * (sym(a, b) + sym(b, a));
  const auto eig = symmetric_eigen(sym);
  Matrix w(r, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t a = 0; a < r; ++a) w(a, i) = eig.vectors(i, a);
  const Matrix v = backward_solve_t(l, w);  // r x k
  m.components = multiply(v.transposed(), basis);
  for (std::size_t i = 0; i < k; ++i) {
    auto row = m.components.row(i);
    const double nv = norm2(row);
    require(nv > 0.0, ErrorCode::numeric, "lda direction vanished");
    for (double& val : row) val /= nv;
    fix_sign(row);
  }

  const Matrix proj = transform(m, x);
  m.class_means = Matrix(classes, k);
  std::size_t ci = 0;
  for (const auto& [label, idx] : members) {
    for (std::size_t i : idx)
      for (std::size_t a = 0; a < k; ++a) m.class_means(ci, a) += proj(i, a);
    for (std::size_t a = 0; a < k; ++a) m.class_means(ci, a) /= static_cast<double>(idx.size());
    ++ci;
  }
  return m;
}

Model fit_lda(const features::FeatureMatrix& fm, const std::vector<std::string>& labels, std::size_t k) {
  Model m = fit_lda(fm.values, labels, k);
  m.feature_names = fm.feature_names;
  return m;
}

Matrix transform(const Model& model, const Matrix& x) {
  require(x.cols() == model.dim(), ErrorCode::dimension_mismatch,
          "projection expects " + std::to_string(model.dim()) + " features, got " + std::to_string(x.cols()));
  return multiply_bt(centered(x, model.means), model.components);
}

ProjectedPoints transform(const Model& model, const features::FeatureMatrix& m,
                          const std::vector<std::string>& labels) {
  require(labels.empty() || labels.size() == m.rows(), ErrorCode::dimension_mismatch,
          "projection: one label per sample required");
  return {m.sample_ids, transform(model, m.values), labels};
}

Matrix inverse_transform(const Model& model, const Matrix& coordinates) {
  require(coordinates.cols() == model.k(), ErrorCode::dimension_mismatch, "inverse_transform: wrong component count");
  Matrix out = multiply(coordinates, model.components);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += model.means[j];
  return out;
}

std::vector<std::string> predict(const Model& model, const Matrix& x) {
  require(model.kind == Kind::lda, ErrorCode::precondition, "predict needs an lda model");
  const Matrix proj = transform(model, x);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < proj.rows(); ++i) {
    std::size_t best = 0;
    double best_d = 0.0;
    for (std::size_t c = 0; c < model.class_labels.size(); ++c) {
      double d = 0.0;
      for (std::size_t a = 0; a < model.k(); ++a) d += std::pow(proj(i, a) - model.class_means(c, a), 2);
      if (c == 0 || d < best_d) {
        best = c;
        best_d = d;
      }
    }
    out.push_back(model.class_labels[best]);
  }
  return out;
}

std::string to_csv(const ProjectedPoints& p) {
  std::vector<std::string> header{"id", "label"};
  for (std::size_t a = 0; a < p.coordinates.cols(); ++a) header.push_back("c" + std::to_string(a + 1));
  std::string out = io::csv_row(header);
  for (std::size_t i = 0; i < p.sample_ids.size(); ++i) {
    std::vector<std::string> row{p.sample_ids[i], p.labels.empty() ? "" : p.labels[i]};
    for (double v : p.coordinates.row(i)) row.push_back(io::format_double(v));
    out += io::csv_row(row);
  }
  return out;
}

std::string to_json(const Model& model) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(model.kind);
  j["components"] = model.k();
  j["features"] = model.dim();
  if (model.kind == Kind::pca) {
    j["eigenvalues"] = model.eigenvalues;
    j["explained_variance_ratio"] = model.explained_variance_ratio;
  } else {
    j["class_labels"] = model.class_labels;
    j["regularization"] = model.regularization;
    nlohmann::ordered_json means = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < model.class_means.rows(); ++c) {
      const auto row = model.class_means.row(c);
      means.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["class_means"] = means;
  }
  // Loadings of the strongest features per component, for reports.
  nlohmann::ordered_json loadings = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < model.k(); ++a) {
    std::vector<std::size_t> order(model.dim());
    for (std::size_t j2 = 0; j2 < order.size(); ++j2) order[j2] = j2;
    const auto row = model.components.row(a);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return std::abs(row[x]) > std::abs(row[y]); });
    nlohmann::ordered_json top = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < std::min<std::size_t>(10, order.size()); ++t) {
      const std::string name = model.feature_names.empty() ? std::to_string(order[t]) : model.feature_names[order[t]];
      top.push_back({{"feature", name}, {"loading", row[order[t]]}});
    }
    loadings.push_back(top);
  }
  j["top_loadings"] = loadings;
  return j.dump(2) + "\n";
}

}  // namespace stylo::projection
