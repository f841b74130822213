#include "hopfflow/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hopfflow {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

void write_snapshot(std::ostream& out, const DiscreteCurve& curve, double t) {
    out << curve.size() << ' ' << curve.orientation << ' ' << format_double(t) << '\n';
    for (std::size_t m = 0; m < curve.size(); ++m) {
        const Vec3& p = curve.nodes[m];
        out << m << ' ' << format_double(p.x) << ' ' << format_double(p.y) << ' '
            << format_double(p.z) << '\n';
    }
}

void write_snapshot_file(const std::string& path, const DiscreteCurve& curve, double t) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_snapshot(out, curve, t);
}

namespace {

double parse_double(const std::string& token, int lineno) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + token.size() || token.empty())
        throw ParseError("snapshot line " + std::to_string(lineno) + ": bad number '" + token +
                         "'");
    return v;
}

}  // namespace

Snapshot read_snapshot(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError("snapshot: empty input");
    ++lineno;
    std::istringstream header(line);
    long n = 0;
    int orientation = 0;
    std::string t_token;
    if (!(header >> n >> orientation >> t_token) || n < 3 ||
        (orientation != 1 && orientation != -1))
        throw ParseError("snapshot line 1: expected 'N orientation t'");
    Snapshot snap;
    snap.t = parse_double(t_token, 1);

    NodeField nodes(n);
    for (long m = 0; m < n; ++m) {
        if (!std::getline(in, line))
            throw ParseError("snapshot line " + std::to_string(lineno + 1) + ": missing row");
        ++lineno;
        std::istringstream row(line);
        long idx = -1;
        std::string sx, sy, sz;
        if (!(row >> idx >> sx >> sy >> sz) || idx != m)
            throw ParseError("snapshot line " + std::to_string(lineno) + ": expected 'm x y z'");
        std::string extra;
        if (row >> extra)
            throw ParseError("snapshot line " + std::to_string(lineno) + ": trailing tokens");
        nodes[m] = {parse_double(sx, lineno), parse_double(sy, lineno), parse_double(sz, lineno)};
    }
    snap.curve = DiscreteCurve::from_nodes(std::move(nodes), orientation);
    return snap;
}

Snapshot read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open snapshot '" + path + "'");
    return read_snapshot(in);
}

TrajectoryCsv::TrajectoryCsv(std::ostream& out, bool with_moduli)
    : out_(out), with_moduli_(with_moduli) {
    out_ << "t,energy,length,area,sup_kappa,grad_l2,dissipation,dt,embedded";
    if (with_moduli_) out_ << ",tau_re,tau_im,tau_red_re,tau_red_im,word";
    out_ << '\n';
}

void TrajectoryCsv::write_row(const FlowState& state, const ModulusPoint* modulus) {
    const EnergyReport& r = state.report;
    out_ << format_double(state.t) << ',' << format_double(r.energy) << ','
         << format_double(r.length) << ',' << format_double(r.area) << ','
         << format_double(r.sup_kappa) << ',' << format_double(r.grad_l2) << ','
         << format_double(r.dissipation) << ',' << format_double(state.stats.dt) << ','
         << (r.embedded.has_value() ? (*r.embedded ? "1" : "0") : "-1");
    if (with_moduli_) {
        if (modulus) {
            out_ << ',' << format_double(modulus->tau.real()) << ','
                 << format_double(modulus->tau.imag()) << ','
                 << format_double(modulus->tau_reduced.real()) << ','
                 << format_double(modulus->tau_reduced.imag()) << ','
                 << (modulus->word.empty() ? "-" : modulus->word);
        } else {
            out_ << ",,,,,";
        }
    }
    out_ << '\n';
}

void export_mesh(std::ostream& out, const HopfTorusMesh& mesh, bool with_projection) {
    out << "# hopf torus mesh " << mesh.n << " x " << mesh.m << " holonomy_twist "
        << format_double(mesh.raw_end_phase) << '\n';
    for (const auto& q : mesh.points)
        out << "v " << format_double(q.w) << ' ' << format_double(q.x) << ' '
            << format_double(q.y) << ' ' << format_double(q.z) << '\n';

    if (with_projection) {
        // Stereographic projection from the axis point farthest from the mesh.
        const Quat candidates[8] = {{1, 0, 0, 0}, {-1, 0, 0, 0}, {0, 1, 0, 0}, {0, -1, 0, 0},
                                    {0, 0, 1, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}, {0, 0, 0, -1}};
        int best = 0;
        double best_gap = -2.0;
        for (int c = 0; c < 8; ++c) {
            double max_dot = -2.0;
            for (const auto& q : mesh.points) max_dot = std::max(max_dot, q.dot(candidates[c]));
            const double gap = 1.0 - max_dot;  // distance of closest point to the pole
            if (gap > best_gap) {
                best_gap = gap;
                best = c;
            }
        }
        const Quat pole = candidates[best];
        // Orthonormal complement of the pole among the coordinate axes.
        Quat axes[3];
        int k = 0;
        for (int c = 0; c < 4; ++c) {
            Quat e{};
            (c == 0 ? e.w : c == 1 ? e.x : c == 2 ? e.y : e.z) = 1.0;
            if (std::abs(e.dot(pole)) > 0.5) continue;
            axes[k++] = e;
        }
        out << "# projection pole " << format_double(pole.w) << ' ' << format_double(pole.x)
            << ' ' << format_double(pole.y) << ' ' << format_double(pole.z) << '\n';
        for (const auto& q : mesh.points) {
            const double denom = 1.0 - q.dot(pole);
            out << "v3 " << format_double(q.dot(axes[0]) / denom) << ' '
                << format_double(q.dot(axes[1]) / denom) << ' '
                << format_double(q.dot(axes[2]) / denom) << '\n';
        }
    }

    // Quad faces by grid index (1-based). Across the s seam the fiber index
    // shifts by the nearest grid multiple of the holonomy twist.
    const int shift = static_cast<int>(std::llround(mesh.raw_end_phase /
                                                    (6.283185307179586 / mesh.m)));
    auto vid = [&](int s, int f) {
        const int fm = ((f % mesh.m) + mesh.m) % mesh.m;
        return s * mesh.m + fm + 1;
    };
    for (int s = 0; s < mesh.n; ++s) {
        const bool seam = (s + 1 == mesh.n);
        const int s1 = seam ? 0 : s + 1;
        for (int f = 0; f < mesh.m; ++f) {
            const int f1 = seam ? f + shift : f;
            out << "f " << vid(s, f) << ' ' << vid(s1, f1) << ' ' << vid(s1, f1 + 1) << ' '
                << vid(s, f + 1) << '\n';
        }
    }
}

void export_mesh_file(const std::string& path, const HopfTorusMesh& mesh, bool with_projection) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    export_mesh(out, mesh, with_projection);
}

}  // namespace hopfflow
