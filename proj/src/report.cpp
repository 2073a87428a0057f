#include "altproj/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "altproj/errors.hpp"
#include "altproj/instance_io.hpp"

namespace altproj {

namespace {

std::string fmt(Real v) { return format_real(v); }

}  // namespace

void write_geometry_csv(std::ostream& out, const GeometryReport& r)
{
    out << "N,c,ell2,iota2,ell_est,iota_est,theta0,rate_base\n";
    out << r.N << ',' << fmt(r.c) << ',' << fmt(r.ell2) << ',' << fmt(r.iota2) << ','
        << fmt(r.ell_est) << ',' << fmt(r.iota_est) << ',' << fmt(r.theta0) << ','
        << fmt(r.rate_base) << '\n';
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace)
{
    out << "n,error,bound_c,bound_iota2\n";
    for (std::size_t n = 0; n < trace.errors.size(); ++n)
        out << n << ',' << fmt(trace.errors[n]) << ',' << fmt(trace.bound_c[n]) << ','
            << fmt(trace.bound_iota2[n]) << '\n';
}

void write_boundary_csv(std::ostream& out, const ContainmentReport& report)
{
    out << "phi,h,re_z,im_z,in_omega,in_stolz,margin\n";
    for (const auto& p : report.points)
        out << fmt(p.sample.phi) << ',' << fmt(p.sample.h) << ',' << fmt(p.sample.z.real()) << ','
            << fmt(p.sample.z.imag()) << ',' << int(p.in_omega) << ',' << int(p.in_stolz) << ','
            << fmt(p.margin) << '\n';
}

void write_decay_csv(std::ostream& out, const std::vector<DecayReport>& reports)
{
    out << "alpha,window,slope,sup_n_alpha_e_n\n";
    for (const auto& r : reports)
        out << fmt(r.alpha) << ',' << r.n_lo << '-' << r.n_hi << ',' << fmt(r.slope) << ','
            << fmt(r.sup_n_alpha_e_n) << '\n';
}

void write_ritt_csv(std::ostream& out, const RittPowerProfile& power,
                    const std::vector<ResolventSample>& resolvent)
{
    out << "kind,index,value\n";
    for (std::size_t i = 0; i < power.profile.size(); ++i)
        out << "power," << i + 1 << ',' << fmt(power.profile[i]) << '\n';
    for (const auto& s : resolvent)
        out << "resolvent," << fmt(s.radius) << ',' << fmt(s.constant) << '\n';
}

void atomic_write(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw InputError("cannot write '" + tmp.string() + "'");
        f << content;
        f.flush();
        if (!f)
            throw InputError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot rename onto '" + path + "': " + ec.message());
    }
}

}  // namespace altproj
