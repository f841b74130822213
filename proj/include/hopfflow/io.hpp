#pragma once

// Persistence: curve snapshots, trajectory CSV, mesh export, summary JSON.
// All floating output is full-precision scientific with '.' decimal.

#include <iosfwd>
#include <string>

#include "hopfflow/curve.hpp"
#include "hopfflow/flow.hpp"
#include "hopfflow/hopf_torus.hpp"
#include "hopfflow/moduli.hpp"

namespace hopfflow {

// Locale-independent full-precision formatting (round-trip exact).
std::string format_double(double v);

struct Snapshot {
    DiscreteCurve curve;
    double t = 0.0;
};

// Plain text: header "N orientation t", then N rows "m x y z".
void write_snapshot(std::ostream& out, const DiscreteCurve& curve, double t);
void write_snapshot_file(const std::string& path, const DiscreteCurve& curve, double t);
Snapshot read_snapshot(std::istream& in);         // ParseError with line number
Snapshot read_snapshot_file(const std::string& path);

// Trajectory time series. Base header:
//   t,energy,length,area,sup_kappa,grad_l2,dissipation,dt,embedded
// with moduli columns tau_re,tau_im,tau_red_re,tau_red_im,word appended when
// enabled.
class TrajectoryCsv {
  public:
    TrajectoryCsv(std::ostream& out, bool with_moduli);
    void write_row(const FlowState& state, const ModulusPoint* modulus = nullptr);

  private:
    std::ostream& out_;
    bool with_moduli_;
};

// Text polygon mesh: "v x y z w" vertices in R^4, optional stereographically
// projected "v3 x y z" block, quad faces by grid index.
void export_mesh(std::ostream& out, const HopfTorusMesh& mesh, bool with_projection = true);
void export_mesh_file(const std::string& path, const HopfTorusMesh& mesh,
                      bool with_projection = true);

}  // namespace hopfflow
