#include "core/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "core/io.hpp"

namespace paircraft {

char proj_basis_char(ProjBasis b) {
  switch (b) {
    case ProjBasis::one: return '1';
    case ProjBasis::two: return '2';
    case ProjBasis::diag: return 'D';
    case ProjBasis::right: return 'R';
  }
  return '?';
}

ProjBasis proj_basis_from_char(char c) {
  switch (c) {
    case '1': return ProjBasis::one;
    case '2': return ProjBasis::two;
    case 'D': return ProjBasis::diag;
    case 'R': return ProjBasis::right;
  }
  throw std::invalid_argument(std::string("unknown projection basis '") + c + "'");
}

Eigen::Vector2cd proj_ket(ProjBasis b) {
  Eigen::Vector2cd v;
  const double s = 1.0 / std::sqrt(2.0);
  switch (b) {
    case ProjBasis::one: v << 1.0, 0.0; break;
    case ProjBasis::two: v << 0.0, 1.0; break;
    case ProjBasis::diag: v << s, s; break;
    case ProjBasis::right: v << s, std::complex<double>(0.0, s); break;
  }
  return v;
}

double proj_basis_weight(ProjBasis b) {
  return (b == ProjBasis::one || b == ProjBasis::two) ? 0.25 : 0.5;
}

namespace {

constexpr std::array<ProjBasis, 4> kBasisOrder = {ProjBasis::one, ProjBasis::two,
                                                  ProjBasis::diag, ProjBasis::right};

int canonical_index(ProjBasis a, ProjBasis b) {
  return static_cast<int>(a) * 4 + static_cast<int>(b);
}

}  // namespace

int ProjectionCountTable::canonical_k(ProjBasis a, ProjBasis b) {
  int time_count = (proj_basis_weight(a) == 0.25 ? 1 : 0) +
                   (proj_basis_weight(b) == 0.25 ? 1 : 0);
  switch (time_count) {
    case 2: return 4;
    case 1: return 2;
    default: return 1;
  }
}

ProjectionCountTable::ProjectionCountTable(std::vector<ProjectionRow> rows)
    : rows_(std::move(rows)) {
  if (rows_.size() != 16)
    throw std::invalid_argument("projection table needs exactly 16 rows, got " +
                                std::to_string(rows_.size()));
  std::array<bool, 16> seen{};
  for (auto& r : rows_) {
    int idx = canonical_index(r.basis_a, r.basis_b);
    if (seen[idx]) {
      std::ostringstream msg;
      msg << "duplicate projection row " << proj_basis_char(r.basis_a)
          << proj_basis_char(r.basis_b);
      throw std::invalid_argument(msg.str());
    }
    seen[idx] = true;
    if (r.n < 0.0) throw std::invalid_argument("projection counts must be >= 0");
    if (r.k < 1) throw std::invalid_argument("projection row multiplicity must be >= 1");
    if (r.w <= 0.0)
      r.w = proj_basis_weight(r.basis_a) * proj_basis_weight(r.basis_b);
  }
  // canonical order for deterministic downstream math
  std::sort(rows_.begin(), rows_.end(), [](const ProjectionRow& x, const ProjectionRow& y) {
    return canonical_index(x.basis_a, x.basis_b) < canonical_index(y.basis_a, y.basis_b);
  });
}

ProjectionCountTable ProjectionCountTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  ++line_no;
  auto header = split_csv_line(line);
  const std::vector<std::string> expect = {"index", "photon_1", "photon_2",
                                           "dd", "dr", "rd", "rr", "n_i"};
  if (header.size() != expect.size() ||
      !std::equal(header.begin(), header.end(), expect.begin()))
    throw std::runtime_error(path + ":1: expected header index,photon_1,photon_2,dd,dr,rd,rr,n_i");

  std::vector<ProjectionRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 8)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 8 columns");
    ProjectionRow r;
    if (cells[1].size() != 1 || cells[2].size() != 1)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad basis label");
    r.basis_a = proj_basis_from_char(cells[1][0]);
    r.basis_b = proj_basis_from_char(cells[2][0]);
    int k = 0;
    double rowsum = 0.0;
    for (int j = 0; j < 4; ++j) {
      const std::string& cell = cells[3 + j];
      if (cell == "-") continue;
      try {
        r.set_counts[j] = std::stod(cell);
      } catch (const std::logic_error&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": bad count '" + cell + "'");
      }
      rowsum += *r.set_counts[j];
      ++k;
    }
    try {
      r.n = std::stod(cells[7]);
    } catch (const std::logic_error&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad total '" + cells[7] + "'");
    }
    if (k > 0) {
      r.k = k;
      if (std::abs(rowsum - r.n) > 1e-6 * std::max(1.0, r.n))
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": per-setting counts do not sum to the total");
    } else {
      r.k = canonical_k(r.basis_a, r.basis_b);
    }
    rows.push_back(std::move(r));
  }
  return ProjectionCountTable(std::move(rows));
}

void ProjectionCountTable::to_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "index,photon_1,photon_2,dd,dr,rd,rr,n_i\n";
  out << std::setprecision(17);
  int idx = 1;
  for (const auto& r : rows_) {
    out << idx++ << ',' << proj_basis_char(r.basis_a) << ','
        << proj_basis_char(r.basis_b);
    for (int j = 0; j < 4; ++j) {
      out << ',';
      if (r.set_counts[j])
        out << *r.set_counts[j];
      else
        out << '-';
    }
    out << ',' << r.n << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ProjectionCountTable ProjectionCountTable::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows"))
    throw std::runtime_error("projection table JSON needs a 'rows' array");
  std::vector<ProjectionRow> rows;
  for (const auto& jr : j.at("rows")) {
    ProjectionRow r;
    std::string ba = jr.at("photon_1").get<std::string>();
    std::string bb = jr.at("photon_2").get<std::string>();
    if (ba.size() != 1 || bb.size() != 1)
      throw std::runtime_error("projection table JSON: basis labels must be single characters");
    r.basis_a = proj_basis_from_char(ba[0]);
    r.basis_b = proj_basis_from_char(bb[0]);
    r.n = jr.at("n").get<double>();
    r.k = jr.contains("k") ? jr.at("k").get<int>() : canonical_k(r.basis_a, r.basis_b);
    if (jr.contains("w")) r.w = jr.at("w").get<double>();
    rows.push_back(r);
  }
  return ProjectionCountTable(std::move(rows));
}

nlohmann::json ProjectionCountTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rows_) {
    rows.push_back({{"photon_1", std::string(1, proj_basis_char(r.basis_a))},
                    {"photon_2", std::string(1, proj_basis_char(r.basis_b))},
                    {"n", r.n},
                    {"k", r.k},
                    {"w", r.w}});
  }
  return nlohmann::json{{"rows", std::move(rows)}};
}

ProjectorSet timebin_projectors() {
  ProjectorSet set;
  int idx = 0;
  for (ProjBasis a : kBasisOrder) {
    Eigen::Vector2cd ka = proj_ket(a);
    for (ProjBasis b : kBasisOrder) {
      Eigen::Vector2cd kb = proj_ket(b);
      Eigen::Vector4cd pair;
      pair << ka(0) * kb(0), ka(0) * kb(1), ka(1) * kb(0), ka(1) * kb(1);
      set.ops[idx] = pair * pair.adjoint();
      set.weights[idx] = proj_basis_weight(a) * proj_basis_weight(b);
      set.labels[idx] = {a, b};
      ++idx;
    }
  }
  return set;
}

namespace {

// Hermitian parameter basis: 4 diagonal units, then symmetric and
// antisymmetric off-diagonal pairs in index order (0,1),(0,2),(0,3),(1,2),
// (1,3),(2,3).
std::array<Eigen::Matrix4cd, 16> hermitian_basis() {
  std::array<Eigen::Matrix4cd, 16> B;
  int m = 0;
  for (int i = 0; i < 4; ++i) {
    B[m] = Eigen::Matrix4cd::Zero();
    B[m](i, i) = 1.0;
    ++m;
  }
  const std::complex<double> kI{0.0, 1.0};
  for (int pass = 0; pass < 2; ++pass)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        B[m] = Eigen::Matrix4cd::Zero();
        if (pass == 0) {
          B[m](i, j) = 1.0;
          B[m](j, i) = 1.0;
        } else {
          B[m](i, j) = kI;
          B[m](j, i) = -kI;
        }
        ++m;
      }
  return B;
}

}  // namespace

LinearReconstruction reconstruct_linear(const ProjectionCountTable& table) {
  ProjectorSet set = timebin_projectors();
  const auto& rows = table.rows();

  // Normalize against the mutually exclusive, exhaustive time-basis subset.
  double n_total = 0.0;
  for (int idx = 0; idx < 16; ++idx) {
    const auto& r = rows[idx];
    if (proj_basis_weight(r.basis_a) == 0.25 && proj_basis_weight(r.basis_b) == 0.25)
      n_total += r.n / (r.k * r.w);
  }
  if (!(n_total > 0.0))
    throw std::invalid_argument("reconstruct_linear: time-basis rows carry no counts");

  Eigen::VectorXd p_hat(16);
  for (int idx = 0; idx < 16; ++idx) {
    const auto& r = rows[idx];
    p_hat(idx) = r.n / (r.k * r.w * n_total);
  }

  auto B = hermitian_basis();
  Eigen::MatrixXd A(16, 16);
  for (int nu = 0; nu < 16; ++nu)
    for (int m = 0; m < 16; ++m)
      A(nu, m) = (set.ops[nu] * B[m]).trace().real();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smin = svd.singularValues()(15);
  double smax = svd.singularValues()(0);
  if (smin < 1e-10 * smax)
    throw std::runtime_error("reconstruct_linear: projector design matrix is singular");
  Eigen::VectorXd x = svd.solve(p_hat);

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int m = 0; m < 16; ++m) rho += x(m) * B[m];

  LinearReconstruction out{DensityMatrix(rho, Basis::timebin), n_total, smax / smin};
  return out;
}

DensityMatrix project_physical(const DensityMatrix& rho) {
  double tr = rho.trace();
  if (std::abs(tr - 1.0) > 0.1)
    throw std::invalid_argument("project_physical: trace deviates from 1 by more than 10%");
  Eigen::Matrix4cd m = rho.matrix() / tr;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
  Eigen::Vector4d lam = es.eigenvalues();  // ascending
  double carried = 0.0;
  int i = 0;
  while (i < 4 && lam(i) + carried / (4 - i) < 0.0) {
    carried += lam(i);
    lam(i) = 0.0;
    ++i;
  }
  if (i == 4)
    throw std::invalid_argument("project_physical: matrix has no positive part");
  for (int j = i; j < 4; ++j) lam(j) += carried / (4 - i);
  Eigen::Matrix4cd out =
      es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(out, rho.basis());
}

ProjectionCountTable expected_counts(const DensityMatrix& rho, double n_scale) {
  if (rho.basis() != Basis::timebin)
    throw std::invalid_argument("expected_counts: state must be in the time-bin basis");
  if (!(n_scale > 0.0))
    throw std::invalid_argument("expected_counts: n_scale must be positive");
  ProjectorSet set = timebin_projectors();
  std::vector<ProjectionRow> rows;
  for (int idx = 0; idx < 16; ++idx) {
    ProjectionRow r;
    r.basis_a = set.labels[idx].first;
    r.basis_b = set.labels[idx].second;
    r.k = ProjectionCountTable::canonical_k(r.basis_a, r.basis_b);
    r.w = set.weights[idx];
    double p = (rho.matrix() * set.ops[idx]).trace().real();
    r.n = std::max(0.0, p) * r.k * r.w * n_scale;
    rows.push_back(r);
  }
  return ProjectionCountTable(std::move(rows));
}

void FreqBinParams::validate() const {
  if (!(a >= 0.0 && a <= 1.0))
    throw std::invalid_argument("FreqBinParams: a must be in [0, 1]");
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument("FreqBinParams: v must be in [0, 1]");
  if (!std::isfinite(phi)) throw std::invalid_argument("FreqBinParams: phi must be finite");
}

bool FreqBinParams::physical() const {
  return v <= 2.0 * std::sqrt(a * (1.0 - a)) + 1e-9;
}

DensityMatrix freqbin_density(const FreqBinParams& p) {
  p.validate();
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = p.a;
  m(3, 3) = 1.0 - p.a;
  std::complex<double> off = 0.5 * p.v * std::exp(std::complex<double>(0.0, p.phi));
  m(0, 3) = off;
  m(3, 0) = std::conj(off);
  return DensityMatrix(m, Basis::freqbin);
}

ChshResult chsh_from_fringes(const std::array<FringeFit, 4>& fits) {
  double k_mean = 0.0;
  for (const auto& f : fits) k_mean += f.period_k;
  k_mean /= 4.0;
  for (const auto& f : fits) {
    if (std::abs(f.period_k - k_mean) > 0.05 * std::abs(k_mean)) {
      std::ostringstream msg;
      msg << "chsh_from_fringes: fitted fringe periods disagree (k = " << f.period_k
          << " vs mean " << k_mean << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  double v_sum = 0.0, var_sum = 0.0;
  for (const auto& f : fits) {
    v_sum += f.visibility;
    if (f.covariance.rows() > 1) var_sum += f.covariance(1, 1);
  }
  double v_pool = v_sum / 4.0;
  double sigma_pool = std::sqrt(var_sum) / 4.0;
  return chsh_from_visibility(v_pool, sigma_pool);
}

}  // namespace paircraft
