#pragma once

#include <string>
#include <vector>

#include "saddlerate/kramers.hpp"

namespace saddlerate {

// Parameter sweeps behind the prefactor curves of the bifurcation scenarios.
//   transverse:   normal form -y1^2/2 + lambda2 y2^2/2 + y2^4/2, det Hess V(x) = 1
//   longitudinal: lambda1 y1^2/2 - y1^4/2 + y2^2/2, det Hess V(x) = 1
//   doublezero:   chain of N particles with eta_1 = lambda2; sombrero formula below
//                 lambda2 = -sqrt(eps|log eps|)
//   sombrero:     same chain; sombrero formula for every lambda2 < 0
enum class Scenario { Transverse, Longitudinal, DoubleZero, Sombrero };

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

struct SweepRow {
    double control = 0.0;
    RateResult rate;
};

std::vector<SweepRow> sweep(Scenario s, const std::vector<double>& controls, const std::vector<double>& eps_list,
                            int chain_size = 3);

// Gate saddle of the chain for eta_1 < 0, located by Newton from seeds on the
// ring of radius sqrt(-eta_1 / 4 C4) in the mode-1 Fourier plane. mu3 is the
// eigenvalue whose eigenvector is most nearly radial, mu2 the most nearly angular.
struct ChainSombrero {
    SombreroSpectrum spectrum;
    int m = 0;  // 2M saddles on the rim
    double c4 = 0.0;
    Vec location;
};
ChainSombrero chain_sombrero(int n, double gamma);

// Relative difference between the double-zero and sombrero times of the chain at
// lambda2 = -sqrt(eps|log eps|), where the two regimes hand over.
double handover_discrepancy(int n, double eps);

// Coupling with eta_1 = lambda2.
double chain_coupling_for(int n, double lambda2);

}  // namespace saddlerate
