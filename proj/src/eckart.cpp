#include "sedsim/eckart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "sedsim/csv.hpp"
#include "sedsim/error.hpp"

namespace sedsim::eckart {

namespace {

using Mat4 = Eigen::Matrix4d;

Mat3 quaternion_rotation(const Eigen::Vector4d& q) {
  Eigen::Quaterniond quat(q(0), q(1), q(2), q(3));
  quat.normalize();
  return quat.toRotationMatrix();
}

// Rotation R (mobile -> lab) maximizing sum m x.(R c), via the largest
// eigenvector of the 4x4 quaternion matrix.
Mat3 best_rotation(const std::vector<Vec3>& ref, const std::vector<Vec3>& lab,
                   const std::vector<double>& masses) {
  Mat3 s = Mat3::Zero();
  for (std::size_t i = 0; i < ref.size(); ++i) s += masses[i] * ref[i] * lab[i].transpose();

  const double sxx = s(0, 0), sxy = s(0, 1), sxz = s(0, 2);
  const double syx = s(1, 0), syy = s(1, 1), syz = s(1, 2);
  const double szx = s(2, 0), szy = s(2, 1), szz = s(2, 2);
  Mat4 n;
  n << sxx + syy + szz, syz - szy, szx - sxz, sxy - syx,
       syz - szy, sxx - syy - szz, sxy + syx, szx + sxz,
       szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy,
       sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz;

  Eigen::SelfAdjointEigenSolver<Mat4> eig(n);
  const auto& values = eig.eigenvalues();
  const auto& vectors = eig.eigenvectors();
  const double scale = std::max({std::fabs(values(0)), std::fabs(values(3)), 1e-300});
  Eigen::Vector4d q = vectors.col(3);
  if (values(3) - values(2) <= 1e-10 * scale) {
    // Degenerate top eigenspace (collinear case): smallest rotation within it.
    const Eigen::Vector4d v3 = vectors.col(3);
    const Eigen::Vector4d v2 = vectors.col(2);
    Eigen::Vector4d projected = v3 * v3(0) + v2 * v2(0);
    if (projected.norm() > 1e-8) q = projected.normalized();
  }
  if (q(0) < 0.0) q = -q;
  return quaternion_rotation(q);
}

struct Residuals {
  Vec3 translational;
  Vec3 rotational;
};

Residuals eckart_residuals(const std::vector<Vec3>& ref, const std::vector<Vec3>& disp,
                           const std::vector<double>& masses) {
  Residuals r{Vec3::Zero(), Vec3::Zero()};
  for (std::size_t i = 0; i < ref.size(); ++i) {
    r.translational += masses[i] * disp[i];
    r.rotational += ref[i].cross(masses[i] * disp[i]);
  }
  return r;
}

std::vector<Vec3> mobile_displacements(const Mat3& rotation, const std::vector<Vec3>& lab,
                                       const std::vector<Vec3>& ref) {
  std::vector<Vec3> d(lab.size());
  for (std::size_t i = 0; i < lab.size(); ++i) d[i] = rotation.transpose() * lab[i] - ref[i];
  return d;
}

bool less_lexicographic(const Permutation& a, const Permutation& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool objectives_tied(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max(a, b) + 1e-12;
}

struct Candidate {
  Permutation assignment;
  double objective = std::numeric_limits<double>::infinity();
  bool valid = false;

  void offer(const Permutation& p, double obj) {
    bool take = !valid;
    if (valid) {
      take = objectives_tied(obj, objective) ? less_lexicographic(p, assignment) : obj < objective;
    }
    if (take) {
      assignment = p;
      objective = obj;
      valid = true;
    }
  }
};

// Molecule atom indices grouped by class, paired with reference indices of the
// same mass class. Both lists are sorted.
struct ClassGroup {
  std::vector<std::size_t> molecule;
  std::vector<std::size_t> reference;
};

std::vector<ClassGroup> match_classes(const AtomSet& molecule, const AtomSet& reference) {
  if (molecule.size() != reference.size()) {
    throw Error(ErrorKind::invalid_argument, "molecule and reference atom counts differ");
  }
  std::vector<ClassGroup> groups(molecule.class_count());
  for (std::size_t i = 0; i < molecule.size(); ++i) {
    groups[molecule.class_ids()[i]].molecule.push_back(i);
  }
  std::vector<bool> used(reference.size(), false);
  for (auto& g : groups) {
    const double m = molecule.masses()[g.molecule.front()];
    for (std::size_t j = 0; j < reference.size(); ++j) {
      if (!used[j] && molecule.same_class_mass(m, reference.masses()[j])) {
        g.reference.push_back(j);
        used[j] = true;
      }
    }
    if (g.reference.size() != g.molecule.size()) {
      throw Error(ErrorKind::invalid_argument,
                  "molecule and reference mass classes differ (class of mass " +
                      std::to_string(m) + ")");
    }
  }
  return groups;
}

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

double bound_objective(const AtomSet& molecule, const EquilibriumConfiguration& reference,
                       const Permutation& p, const FrameOptions& options, EckartFrame* out) {
  EckartFrame frame = bind_frame(molecule, reference, p, options);
  const double obj = displacement_objective(frame);
  if (out) *out = std::move(frame);
  return obj;
}

PermutationResult exhaustive_search(const AtomSet& molecule,
                                    const EquilibriumConfiguration& reference,
                                    const std::vector<ClassGroup>& groups,
                                    const FrameOptions& options) {
  std::vector<std::vector<std::size_t>> images;
  for (const auto& g : groups) images.push_back(g.reference);

  Candidate best;
  Permutation p(molecule.size());
  while (true) {
    for (std::size_t c = 0; c < groups.size(); ++c) {
      for (std::size_t k = 0; k < groups[c].molecule.size(); ++k) {
        p[groups[c].molecule[k]] = images[c][k];
      }
    }
    best.offer(p, bound_objective(molecule, reference, p, options, nullptr));

    // Odometer over per-class permutations.
    std::size_t c = 0;
    for (; c < images.size(); ++c) {
      if (std::next_permutation(images[c].begin(), images[c].end())) break;
    }
    if (c == images.size()) break;
  }
  return {best.assignment, best.objective};
}

Permutation assign_given_frame(const AtomSet& molecule, const EquilibriumConfiguration& reference,
                               const std::vector<ClassGroup>& groups, const Mat3& rotation,
                               const Vec3& origin) {
  Permutation p(molecule.size());
  for (const auto& g : groups) {
    const std::size_t n = g.molecule.size();
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t a = 0; a < n; ++a) {
      const Vec3& x = molecule.positions()[g.molecule[a]];
      for (std::size_t b = 0; b < n; ++b) {
        const Vec3 placed = rotation * reference.coordinates()[g.reference[b]] + origin;
        cost[a][b] = (x - placed).norm();
      }
    }
    const auto match = solve_assignment(cost);
    for (std::size_t a = 0; a < n; ++a) p[g.molecule[a]] = g.reference[match[a]];
  }
  return p;
}

std::vector<Mat3> principal_axis_seeds(const AtomSet& molecule,
                                       const EquilibriumConfiguration& reference) {
  auto inertia_axes = [](const std::vector<Vec3>& pts, const std::vector<double>& masses,
                         const Vec3& center) {
    Mat3 inertia = Mat3::Zero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec3 r = pts[i] - center;
      inertia += masses[i] * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
    return Mat3(eig.eigenvectors());
  };
  const Vec3 origin = center_of_mass(molecule.positions(), molecule.masses());
  const Mat3 mol_axes = inertia_axes(molecule.positions(), molecule.masses(), origin);
  const Mat3 ref_axes = inertia_axes(reference.coordinates(), reference.atoms().masses(),
                                     Vec3::Zero());
  std::vector<Mat3> seeds;
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      Eigen::Vector3d signs(s1, s2, 1.0);
      Mat3 r = mol_axes * signs.asDiagonal() * ref_axes.transpose();
      if (r.determinant() < 0.0) {
        signs(2) = -1.0;
        r = mol_axes * signs.asDiagonal() * ref_axes.transpose();
      }
      seeds.push_back(r);
    }
  }
  return seeds;
}

PermutationResult assignment_search(const AtomSet& molecule,
                                    const EquilibriumConfiguration& reference,
                                    const std::vector<ClassGroup>& groups,
                                    const FrameOptions& options) {
  const Vec3 origin = center_of_mass(molecule.positions(), molecule.masses());
  Candidate best;

  auto descend = [&](Permutation p) {
    EckartFrame frame;
    double obj = bound_objective(molecule, reference, p, options, &frame);
    best.offer(p, obj);
    for (int iter = 0; iter < 50; ++iter) {
      Permutation next = assign_given_frame(molecule, reference, groups, frame.rotation, origin);
      if (next == p) break;
      EckartFrame next_frame;
      const double next_obj = bound_objective(molecule, reference, next, options, &next_frame);
      best.offer(next, next_obj);
      if (next_obj >= obj && !objectives_tied(next_obj, obj)) break;
      p = std::move(next);
      frame = std::move(next_frame);
      obj = next_obj;
    }
  };

  // Identity pairing, when the atom order already matches by class.
  Permutation identity = identity_permutation(molecule.size());
  bool identity_ok = true;
  for (std::size_t i = 0; i < molecule.size(); ++i) {
    identity_ok = identity_ok &&
                  molecule.same_class_mass(molecule.masses()[i], reference.atoms().masses()[i]);
  }
  if (identity_ok) descend(identity);

  for (const Mat3& seed : principal_axis_seeds(molecule, reference)) {
    descend(assign_given_frame(molecule, reference, groups, seed, origin));
  }
  return {best.assignment, best.objective};
}

}  // namespace

AtomSet::AtomSet(std::vector<std::string> labels, std::vector<double> masses,
                 std::vector<Vec3> positions, double mass_tolerance)
    : labels_(std::move(labels)),
      masses_(std::move(masses)),
      positions_(std::move(positions)),
      mass_tolerance_(mass_tolerance) {
  if (masses_.size() != positions_.size() || labels_.size() != masses_.size()) {
    throw Error(ErrorKind::invalid_argument, "labels, masses and positions differ in length");
  }
  if (masses_.empty()) throw Error(ErrorKind::invalid_argument, "atom set is empty");
  if (!(mass_tolerance >= 0.0)) throw Error(ErrorKind::invalid_argument, "mass tolerance < 0");
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i])) {
      throw Error(ErrorKind::invalid_argument, "masses must be > 0");
    }
    if (!positions_[i].allFinite()) {
      throw Error(ErrorKind::invalid_argument, "positions must be finite");
    }
  }
  class_ids_.assign(masses_.size(), 0);
  std::vector<double> representative;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    auto it = std::find_if(representative.begin(), representative.end(),
                           [&](double m) { return same_class_mass(m, masses_[i]); });
    if (it == representative.end()) {
      class_ids_[i] = representative.size();
      representative.push_back(masses_[i]);
    } else {
      class_ids_[i] = static_cast<std::size_t>(it - representative.begin());
    }
  }
  class_count_ = representative.size();
}

bool AtomSet::same_class_mass(double a, double b) const {
  return std::fabs(a - b) <= mass_tolerance_ * std::max(a, b);
}

AtomSet AtomSet::with_positions(std::vector<Vec3> positions) const {
  return AtomSet(labels_, masses_, std::move(positions), mass_tolerance_);
}

EquilibriumConfiguration::EquilibriumConfiguration(const AtomSet& atoms)
    : atoms_([&atoms] {
        const Vec3 com = center_of_mass(atoms.positions(), atoms.masses());
        std::vector<Vec3> centered;
        centered.reserve(atoms.size());
        for (const auto& p : atoms.positions()) centered.push_back(p - com);
        return atoms.with_positions(std::move(centered));
      }()) {}

Vec3 center_of_mass(const std::vector<Vec3>& points, const std::vector<double>& masses) {
  if (points.empty() || points.size() != masses.size()) {
    throw Error(ErrorKind::invalid_argument, "need matching, nonempty points and masses");
  }
  double total = 0.0;
  Vec3 weighted = Vec3::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(masses[i] > 0.0)) throw Error(ErrorKind::invalid_argument, "masses must be > 0");
    total += masses[i];
    weighted += masses[i] * points[i];
  }
  Vec3 com = weighted / total;
  // One correction pass removes most of the rounding left in the first sum.
  Vec3 correction = Vec3::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) correction += masses[i] * (points[i] - com);
  return com + correction / total;
}

std::vector<Vec3> EckartFrame::lab_displacements() const {
  std::vector<Vec3> out;
  out.reserve(displacements.size());
  for (const auto& d : displacements) out.push_back(rotation * d);
  return out;
}

EckartFrame bind_frame(const AtomSet& molecule, const EquilibriumConfiguration& reference,
                       const FrameOptions& options) {
  return bind_frame(molecule, reference, identity_permutation(molecule.size()), options);
}

EckartFrame bind_frame(const AtomSet& molecule, const EquilibriumConfiguration& reference,
                       const Permutation& assignment, const FrameOptions& options) {
  const std::size_t n = molecule.size();
  if (reference.size() != n || assignment.size() != n) {
    throw Error(ErrorKind::invalid_argument, "atom counts differ");
  }
  std::vector<bool> seen(n, false);
  std::vector<Vec3> ref(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = assignment[i];
    if (j >= n || seen[j]) throw Error(ErrorKind::invalid_argument, "assignment is not a permutation");
    seen[j] = true;
    if (!molecule.same_class_mass(molecule.masses()[i], reference.atoms().masses()[j])) {
      throw Error(ErrorKind::invalid_argument,
                  "atom " + std::to_string(i) + " assigned to a reference point of different mass");
    }
    ref[i] = reference.coordinates()[j];
  }

  const auto& masses = molecule.masses();
  const Vec3 origin = center_of_mass(molecule.positions(), masses);
  std::vector<Vec3> lab(n);
  for (std::size_t i = 0; i < n; ++i) lab[i] = molecule.positions()[i] - origin;

  Mat3 rotation = best_rotation(ref, lab, masses);
  auto disp = mobile_displacements(rotation, lab, ref);
  auto res = eckart_residuals(ref, disp, masses);

  // Newton polish: y = R^T x, perturbation y -> y + w x y changes the residual
  // by J w with J = sum m [(c.y) I - y c^T].
  for (int iter = 0; iter < options.max_refinements && res.rotational.norm() > 0.0; ++iter) {
    Mat3 jac = Mat3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 y = rotation.transpose() * lab[i];
      jac += masses[i] * (ref[i].dot(y) * Mat3::Identity() - y * ref[i].transpose());
    }
    const Vec3 step = -jac.completeOrthogonalDecomposition().solve(res.rotational);
    if (!step.allFinite() || step.norm() == 0.0) break;
    const Mat3 q = Eigen::AngleAxisd(step.norm(), step.normalized()).toRotationMatrix();
    const Mat3 candidate = rotation * q.transpose();
    auto cand_disp = mobile_displacements(candidate, lab, ref);
    auto cand_res = eckart_residuals(ref, cand_disp, masses);
    if (!(cand_res.rotational.norm() < res.rotational.norm())) break;
    rotation = candidate;
    disp = std::move(cand_disp);
    res = cand_res;
  }

  const double rot_norm = res.rotational.norm();
  if (!(rot_norm <= options.tolerance)) {
    std::ostringstream msg;
    msg << "rotational residual " << rot_norm << " exceeds tolerance " << options.tolerance;
    throw Error(ErrorKind::frame_not_found, msg.str());
  }
  return {origin, rotation, std::move(disp), assignment, res.translational.norm(), rot_norm};
}

double displacement_objective(const EckartFrame& frame) {
  double total = 0.0;
  for (const auto& d : frame.displacements) total += d.norm();
  return total;
}

PermutationResult resolve_permutation(const AtomSet& molecule,
                                      const EquilibriumConfiguration& reference,
                                      const PermutationOptions& options) {
  const auto groups = match_classes(molecule, reference.atoms());
  std::size_t largest = 0;
  for (const auto& g : groups) largest = std::max(largest, g.molecule.size());

  if (largest <= 1) {
    Permutation p(molecule.size());
    for (const auto& g : groups) p[g.molecule.front()] = g.reference.front();
    return {p, bound_objective(molecule, reference, p, options.frame, nullptr)};
  }

  PermutationSolver solver = options.solver;
  if (solver == PermutationSolver::automatic) {
    solver = largest <= options.brute_force_cap ? PermutationSolver::exhaustive
                                                : PermutationSolver::assignment;
  }
  if (solver == PermutationSolver::exhaustive) {
    if (largest > options.brute_force_cap) {
      throw Error(ErrorKind::invalid_argument,
                  "class of size " + std::to_string(largest) +
                      " exceeds the exhaustive cap; use the assignment solver");
    }
    return exhaustive_search(molecule, reference, groups, options.frame);
  }
  return assignment_search(molecule, reference, groups, options.frame);
}

std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  for (const auto& row : cost) {
    if (row.size() != n) throw Error(ErrorKind::invalid_argument, "cost matrix must be square");
  }
  // Potentials formulation, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t r0 = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[r0 - 1][j - 1] - u[r0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = col0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> result(n);
  for (std::size_t j = 1; j <= n; ++j) result[match[j] - 1] = j - 1;
  return result;
}

SymmetryReport symmetry_operations(const EquilibriumConfiguration& reference, double tol) {
  const auto& c = reference.coordinates();
  const auto& atoms = reference.atoms();
  const std::size_t n = c.size();
  SymmetryReport report;

  std::size_t a = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (c[i].norm() > c[a].norm()) a = i;
  }
  if (c[a].norm() <= tol) {
    report.continuous_axis = true;
    return report;
  }
  const Vec3 axis = c[a].normalized();
  std::size_t b = a;
  double best_offaxis = tol;
  for (std::size_t i = 0; i < n; ++i) {
    const double off = (c[i] - c[i].dot(axis) * axis).norm();
    if (off > best_offaxis) {
      best_offaxis = off;
      b = i;
    }
  }
  if (b == a) {
    report.continuous_axis = true;
    report.axis = axis;
    return report;
  }

  Mat3 basis;
  basis << c[a], c[b], c[a].cross(c[b]);
  const Mat3 basis_inv = basis.inverse();
  const auto& cls = atoms.class_ids();

  std::map<std::pair<Permutation, bool>, Mat3> found;
  for (std::size_t a2 = 0; a2 < n; ++a2) {
    if (cls[a2] != cls[a] || std::fabs(c[a2].norm() - c[a].norm()) > tol) continue;
    for (std::size_t b2 = 0; b2 < n; ++b2) {
      if (b2 == a2 || cls[b2] != cls[b]) continue;
      if (std::fabs(c[b2].norm() - c[b].norm()) > tol) continue;
      if (std::fabs(c[a2].dot(c[b2]) - c[a].dot(c[b])) > tol * (c[a].norm() + c[b].norm())) {
        continue;
      }
      for (double sign : {1.0, -1.0}) {
        Mat3 image;
        image << c[a2], c[b2], sign * c[a2].cross(c[b2]);
        Mat3 t = image * basis_inv;
        // Project onto the nearest orthogonal matrix.
        Eigen::JacobiSVD<Mat3> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
        t = svd.matrixU() * svd.matrixV().transpose();

        Permutation perm(n);
        std::vector<bool> taken(n, false);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          const Vec3 moved = t * c[i];
          ok = false;
          for (std::size_t j = 0; j < n; ++j) {
            if (!taken[j] && cls[j] == cls[i] && (moved - c[j]).norm() <= tol) {
              perm[i] = j;
              taken[j] = true;
              ok = true;
              break;
            }
          }
        }
        if (ok) found.emplace(std::make_pair(perm, t.determinant() < 0.0), t);
      }
    }
  }
  for (auto& [key, t] : found) report.operations.push_back({t, key.first});
  return report;
}

AtomSet read_xyz(std::istream& in, double mass_tolerance) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) {
      throw Error(ErrorKind::parse_error, std::string("unexpected end of input reading ") + what);
    }
    ++line_no;
  };
  next_line("atom count");
  std::size_t count = 0;
  {
    std::istringstream ss(line);
    long long raw = -1;
    if (!(ss >> raw) || raw <= 0) {
      throw Error(ErrorKind::parse_error, "line 1: expected a positive atom count");
    }
    count = static_cast<std::size_t>(raw);
  }
  next_line("comment");
  std::vector<std::string> labels;
  std::vector<double> masses;
  std::vector<Vec3> positions;
  for (std::size_t i = 0; i < count; ++i) {
    next_line("atom record");
    std::istringstream ss(line);
    std::string label;
    double m = 0, x = 0, y = 0, z = 0;
    if (!(ss >> label >> m >> x >> y >> z)) {
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": expected 'label mass x y z'");
    }
    labels.push_back(label);
    masses.push_back(m);
    positions.emplace_back(x, y, z);
  }
  return AtomSet(std::move(labels), std::move(masses), std::move(positions), mass_tolerance);
}

AtomSet read_xyz_file(const std::string& path, double mass_tolerance) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open " + path);
  try {
    return read_xyz(in, mass_tolerance);
  } catch (const Error& e) {
    throw Error(ErrorKind::parse_error, path + ": " + e.what());
  }
}

std::string xyz_string(const AtomSet& atoms, const std::string& comment) {
  std::string out = std::to_string(atoms.size()) + "\n" + comment + "\n";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& p = atoms.positions()[i];
    out += atoms.labels()[i] + " " + csv::format_number(atoms.masses()[i]) + " " +
           csv::format_number(p.x()) + " " + csv::format_number(p.y()) + " " +
           csv::format_number(p.z()) + "\n";
  }
  return out;
}

std::string frame_csv(const EckartFrame& frame) {
  csv::Writer w({"quantity", "x", "y", "z"});
  auto row = [&w](const std::string& name, const Vec3& v) {
    w.add_row({name, csv::format_number(v.x()), csv::format_number(v.y()),
               csv::format_number(v.z())});
  };
  row("origin", frame.origin);
  for (int r = 0; r < 3; ++r) row("rotation_row" + std::to_string(r), frame.rotation.row(r));
  row("residual", Vec3(frame.translational_residual, frame.rotational_residual, 0.0));
  return w.str();
}

std::string displacement_csv(const AtomSet& molecule, const EckartFrame& frame) {
  csv::Writer w({"atom", "label", "reference_index", "dx", "dy", "dz"});
  for (std::size_t i = 0; i < frame.displacements.size(); ++i) {
    const auto& d = frame.displacements[i];
    w.add_row({std::to_string(i), molecule.labels()[i], std::to_string(frame.assignment[i]),
               csv::format_number(d.x()), csv::format_number(d.y()), csv::format_number(d.z())});
  }
  return w.str();
}

std::string symmetry_csv(const SymmetryReport& report) {
  std::vector<std::string> header{"operation", "determinant", "permutation"};
  for (int r = 0; r < 3; ++r) {
    for (int col = 0; col < 3; ++col) header.push_back("t" + std::to_string(r) + std::to_string(col));
  }
  csv::Writer w(header);
  for (std::size_t k = 0; k < report.operations.size(); ++k) {
    const auto& op = report.operations[k];
    std::string perm;
    for (std::size_t i = 0; i < op.permutation.size(); ++i) {
      if (i) perm += ' ';
      perm += std::to_string(op.permutation[i]);
    }
    std::vector<std::string> cells{std::to_string(k),
                                   op.transform.determinant() < 0.0 ? "-1" : "1", perm};
    for (int r = 0; r < 3; ++r) {
      for (int col = 0; col < 3; ++col) cells.push_back(csv::format_number(op.transform(r, col)));
    }
    w.add_row(std::move(cells));
  }
  return w.str();
}

}  // namespace sedsim::eckart
