#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace sedsim::eckart {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// assignment[i] = index of the reference point matched to molecule atom i.
using Permutation = std::vector<std::size_t>;

inline constexpr double kDefaultMassTolerance = 1e-6;

// Atoms with masses (amu) and lab positions (angstrom). Atoms whose masses agree
// within the relative tolerance share a class id; ids are numbered in order of
// first appearance.
class AtomSet {
 public:
  AtomSet(std::vector<std::string> labels, std::vector<double> masses, std::vector<Vec3> positions,
          double mass_tolerance = kDefaultMassTolerance);

  std::size_t size() const { return masses_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& masses() const { return masses_; }
  const std::vector<Vec3>& positions() const { return positions_; }
  const std::vector<std::size_t>& class_ids() const { return class_ids_; }
  std::size_t class_count() const { return class_count_; }
  double mass_tolerance() const { return mass_tolerance_; }

  bool same_class_mass(double a, double b) const;

  AtomSet with_positions(std::vector<Vec3> positions) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> masses_;
  std::vector<Vec3> positions_;
  std::vector<std::size_t> class_ids_;
  std::size_t class_count_ = 0;
  double mass_tolerance_;
};

// Reference figure in the mobile frame. Construction recenters the coordinates
// on the mass-weighted centroid.
class EquilibriumConfiguration {
 public:
  explicit EquilibriumConfiguration(const AtomSet& atoms);

  const AtomSet& atoms() const { return atoms_; }
  const std::vector<Vec3>& coordinates() const { return atoms_.positions(); }
  std::size_t size() const { return atoms_.size(); }

 private:
  AtomSet atoms_;
};

Vec3 center_of_mass(const std::vector<Vec3>& points, const std::vector<double>& masses);

struct EckartFrame {
  Vec3 origin;                     // molecule centre of mass, lab frame
  Mat3 rotation;                   // mobile frame -> lab frame
  std::vector<Vec3> displacements; // per atom, mobile-frame components
  Permutation assignment;
  double translational_residual;   // |sum m d|
  double rotational_residual;      // |sum c x (m d)|

  // Displacements rotated into the lab frame.
  std::vector<Vec3> lab_displacements() const;
};

struct FrameOptions {
  double tolerance = 1e-10;  // on the rotational residual, amu * angstrom^2
  int max_refinements = 8;
};

// Eckart binding. The rotation is the quaternion-eigenvector solution that
// minimizes the mass-weighted squared displacement (a stationary point of that
// functional satisfies the rotational condition), polished by Newton steps on
// the rotational residual. For a collinear reference the along-axis component
// of that residual is identically zero and the remaining freedom (spin about the
// axis) is fixed by taking the smallest rotation in the degenerate eigenspace.
// Throws FrameNotFound, reporting the best residual, if the tolerance is missed.
EckartFrame bind_frame(const AtomSet& molecule, const EquilibriumConfiguration& reference,
                       const Permutation& assignment, const FrameOptions& options = {});
EckartFrame bind_frame(const AtomSet& molecule, const EquilibriumConfiguration& reference,
                       const FrameOptions& options = {});

// Sum of displacement moduli.
double displacement_objective(const EckartFrame& frame);

enum class PermutationSolver {
  automatic,   // exhaustive when every class fits the cap, assignment otherwise
  exhaustive,  // every within-class permutation, each with its own frame
  assignment,  // alternate frame binding and per-class linear assignment
};

struct PermutationOptions {
  PermutationSolver solver = PermutationSolver::automatic;
  std::size_t brute_force_cap = 6;  // largest class the exhaustive search accepts
  FrameOptions frame;
};

struct PermutationResult {
  Permutation assignment;
  double objective;  // sum of displacement moduli after binding
};

// Within-class assignment minimizing the summed displacement moduli. Objectives
// within a relative 1e-9 are treated as tied and the lexicographically smallest
// assignment wins. Meant to be resolved once per trajectory.
PermutationResult resolve_permutation(const AtomSet& molecule,
                                      const EquilibriumConfiguration& reference,
                                      const PermutationOptions& options = {});

// Minimum-cost perfect matching on a square cost matrix (Hungarian method).
// Returns row -> column.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

struct SymmetryOperation {
  Mat3 transform;           // orthogonal, det +1 or -1
  Permutation permutation;  // transform * c[i] == c[permutation[i]]
};

struct SymmetryReport {
  bool continuous_axis = false;
  Vec3 axis = Vec3::Zero();  // unit axis when continuous (zero for a point)
  std::vector<SymmetryOperation> operations;
};

// Enumerates the point-group operations of the reference as (transform,
// permutation) pairs, proper and improper. Linear (or single-point) references
// have infinite groups and yield a continuous-axis report with no operations.
// Output is sorted by permutation, proper before improper.
SymmetryReport symmetry_operations(const EquilibriumConfiguration& reference, double tol = 1e-6);

// Extended XYZ: count line, comment line, then "label mass_amu x y z".
AtomSet read_xyz(std::istream& in, double mass_tolerance = kDefaultMassTolerance);
AtomSet read_xyz_file(const std::string& path, double mass_tolerance = kDefaultMassTolerance);
std::string xyz_string(const AtomSet& atoms, const std::string& comment = "");

std::string frame_csv(const EckartFrame& frame);
std::string displacement_csv(const AtomSet& molecule, const EckartFrame& frame);
std::string symmetry_csv(const SymmetryReport& report);

}  // namespace sedsim::eckart
