#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "so21osc/model.hpp"
#include "so21osc/propagate.hpp"
#include "so21osc/wavepacket.hpp"

namespace so21 {

/// Shortest round-trip formatting ("%.17g").
std::string fmt(double x);

/// Header `t,omega,n1,n2,n3`. Throws BadInput naming the bad row.
std::vector<ProfileSample> read_profile_csv(std::istream& in);
std::vector<ProfileSample> read_profile_csv_file(const std::string& path);

/// Header `t,e1,e2,e3,E11..E33,Q11..Q22,A1,A2`.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

/// Header `t,xbar,pbar,dx,dp,cov`.
void write_orbit_csv(std::ostream& out, const std::vector<double>& t,
                     const std::vector<MomentState>& states);

}  // namespace so21
