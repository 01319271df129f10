#pragma once

#include <string>
#include <vector>

#include "chebsolve/approximate.hpp"
#include "chebsolve/chebpoly.hpp"

namespace chebsolve {

enum RootFlag : unsigned {
    kSpuriousCandidate = 1u,  // tolerance admits this candidate but the proxy has no zero here
    kPossibleDuplicate = 2u,  // several converged points may describe one zero
    kDepthWarning = 4u,       // a depth or iteration cap cut the refinement short
};

/// Flag names in canonical order, e.g. {"SPURIOUS_CANDIDATE", "DEPTH_WARNING"}.
std::vector<std::string> flag_names(unsigned flags);

struct RootRecord {
    Eigen::VectorXd point;      // best zero estimate, caller coordinates
    Box box;                    // bounding box certified to contain any true zero nearby
    unsigned flags = 0;
    Eigen::VectorXd residuals;  // |f_i(point)|, filled by the driver
};

struct SolveConfig {
    double maxIntervalSize = 1e-5;        // driver re-approximates boxes wider than this
    double reductionProgressFactor = 0.99;
    double baseCaseShrinkCap = 0.4;       // 1/2.5: below this shrink, keep reducing
    double firstSplitOffset = 0.0297;     // first split lands off-center to dodge boundary roots
    double conditionCap = 1e8;
    int maxDepth = 100;
    double trimTol = -1.0;                // <0: machine epsilon * coefficient mass
    int threads = 1;
    ApproxConfig approx;
};

struct SolveStats {
    long functionEvals = 0;
    long subdivisions = 0;
    int maxDepth = 0;
    double wallTime = 0.0;
};

/// Receives solver events. Callbacks fire on the solving thread; with
/// threads > 1 the receiver must synchronize itself.
class SolveObserver {
public:
    virtual ~SolveObserver() = default;
    // an exclusion check ruled out the current box: p is the polynomial in the
    // box's own [-1,1]^n frame and |p| > eps holds throughout it
    virtual void onExclusion(const ChebPoly& p, double eps, const std::string& check) {
        (void)p, (void)eps, (void)check;
    }
};

/// True if the constant term alone certifies |p| > eps on [-1,1]^n.
bool constant_term_check(const ChebPoly& p, double eps);

/// True if exact minimization of the terms of total degree <= 2, with
/// worst-case bounds on the cross terms, certifies |p| > eps on [-1,1]^n.
bool quadratic_check(const ChebPoly& p, double eps);

struct Reduction {
    enum class Kind { Shrunk, Empty, NoProgress };
    Kind kind = Kind::NoProgress;
    Box box{Eigen::VectorXd(), Eigen::VectorXd()};
};

/// Intersects [-1,1]^n with the slabs implied by each linear coefficient:
/// on any tolerance-zero, |A_ij x_j + a_0| cannot exceed eps_i plus the mass
/// of the remaining terms. Kind is Shrunk or Empty.
Reduction reduce_single(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps);

/// Solves the linear part A x = -B and returns the box centered there with
/// half-widths |A^-1| E, after scaling columns by exact powers of two.
/// Ill-conditioned or singular systems give NoProgress.
Reduction reduce_full(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps,
                      const SolveConfig& cfg = {});

/// After a no-progress reduction pass: rerun the linear reduction with only
/// the eps_i as widths. True (base case) if even that cannot shrink every
/// coordinate below the cap.
bool base_case_check(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps,
                     const SolveConfig& cfg = {});

/// Splits every coordinate at the midpoint (or slightly off it for the very
/// first split) and returns the 2^n children, dimension 0 most significant.
std::vector<Box> subdivide(const Box& box, bool isFirst, const SolveConfig& cfg = {});

struct FinalRoot {
    Eigen::VectorXd point;
    unsigned flags = 0;
};

/// Zooms in on the zero of the proxy system with all tolerances set to zero
/// until the tracked center stops moving. Points come back in box
/// coordinates. Exclusion during the zoom flags the candidate spurious;
/// subdivision inside this phase can return several flagged points.
std::vector<FinalRoot> solve_final_root(const std::vector<ChebPoly>& polys, const Box& box,
                                        const SolveConfig& cfg = {});

/// Groups records whose boxes touch (1-ulp tolerance) and re-solves each
/// group on its hull, unless the hull is the whole box, in which case the
/// extras are only flagged as duplicates. polys/eps describe the system on
/// box. Output is sorted lexicographically by box lower corner.
std::vector<RootRecord> merge_intervals(std::vector<RootRecord> records,
                                        const std::vector<ChebPoly>& polys,
                                        const Eigen::VectorXd& eps, const Box& box,
                                        const SolveConfig& cfg = {});

/// Finds every zero of the proxy system {p_i = 0} on box, where each p_i is
/// certified within eps_i of the true function on that box. Any true common
/// zero lies in the union of the returned bounding boxes; points are the
/// proxy zeros. Records come back in box coordinates, sorted
/// lexicographically by box lower corner.
std::vector<RootRecord> cheb_solve(const std::vector<ChebPoly>& polys, const Eigen::VectorXd& eps,
                                   const Box& box, const SolveConfig& cfg = {},
                                   SolveStats* stats = nullptr, SolveObserver* observer = nullptr);

}  // namespace chebsolve
