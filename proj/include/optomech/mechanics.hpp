#pragma once

// Mechanical side: the breathing mode of an elastic sphere, effective mass,
// strain-optical corrections, and the dissipation channels (structural
// two-level systems, gas, clamping, hybridisation with a lossy mode).

#include <complex>
#include <functional>
#include <vector>

namespace om {

struct ElasticMaterial {
    double density;  // [kg/m^3]
    double youngs;   // [Pa]
    double poisson;
    double p1, p2;   // photo-elastic coefficients
    double n_index;  // optical refractive index

    ElasticMaterial(double density, double youngs, double poisson, double p1 = 0.0,
                    double p2 = 0.0, double n_index = 1.0);

    double lame_lambda() const;
    double lame_mu() const;
    double v_long() const;   // sqrt((lambda + 2 mu)/rho)
    double v_trans() const;  // sqrt(mu/rho)
};

// Fused silica; elastic constants chosen to reproduce kR = 2.4005 and
// f R = 2280 m/s for the breathing mode.
ElasticMaterial fused_silica();

struct SphereMode {
    double k_root;   // k R
    double radius;   // [m]
    double omega;    // [rad/s]
    double m_eff;    // [kg], from the strain energy
    // u_r(r) for unit radial displacement of the surface
    std::function<double(double)> radial_profile;
};

// Smallest positive root of the free-surface condition for the (1,0,0) mode.
// Throws NumericalError if the scan on [0.1, 10] finds no sign change.
double sphere_characteristic_root(const ElasticMaterial& mat);
// Left-hand side (1 - r y^2/4) tan(y)/y - 1 with r = v_long^2/v_trans^2.
double sphere_characteristic(const ElasticMaterial& mat, double y);

SphereMode sphere_fundamental(const ElasticMaterial& mat, double radius);

struct SphereFields {
    double u_r;
    double e_rr, e_tt, e_pp;
    double s_rr, s_tt, s_pp;
    double energy_density;  // (1/2) sum sigma_ij eps_ij [J/m^3]
};

// Fields for a surface displacement of 1 m; everything scales linearly
// (energy quadratically) with the actual amplitude. Finite at r = 0.
SphereFields sphere_fields(const SphereMode& mode, const ElasticMaterial& mat, double r);

// Strain energy for unit surface displacement, by quadrature over the volume.
double sphere_strain_energy(const ElasticMaterial& mat, double radius);
// m_eff = 2 U / (Omega^2 x^2) from the strain energy.
double sphere_effective_mass(const ElasticMaterial& mat, double radius);
// Independent closed form from the kinetic energy of the same mode.
double sphere_effective_mass_kinetic(const ElasticMaterial& mat, double radius);

enum class Polarization { te, tm };

struct PhotoelasticShift {
    double delta_inv_n2;    // change of n^-2
    double relative;        // |index shift| / |boundary shift|
    double relative_signed; // positive when both shifts have the same sign
};

PhotoelasticShift photoelastic_shift(const ElasticMaterial& mat, const SphereFields& at_surface,
                                     Polarization pol);

struct TlsParams {
    double amplitude;  // C
    double v0;         // [J]
    double zeta;
    double tau0;       // [s]
    double delta_c;    // [J]
};

// Defaults from the glass fit with C calibrated to Q_min = 500 at 40 MHz.
TlsParams tls_silica();

double tls_inverse_q(const TlsParams& p, double temperature, double omega);
double tls_quality_factor(const TlsParams& p, double temperature, double omega);
double tls_frequency_shift(const TlsParams& p, double temperature, double omega);

struct TlsMinimum {
    double temperature;
    double q;
};
// Minimum over T in [t_lo, t_hi].
TlsMinimum tls_minimum(const TlsParams& p, double omega, double t_lo = 5.0, double t_hi = 300.0);
// Amplitude that places the minimum quality factor at q_min.
double calibrate_tls_amplitude(const TlsParams& p, double omega, double q_min);

double combine_q(const std::vector<double>& channels);

enum class GasRegime { viscous, molecular };
struct GasReference {
    double pressure;  // [Pa]
    double q;
};
double gas_q(const GasReference& ref, double pressure, GasRegime regime);

struct CoupledModes {
    double omega_plus, q_plus;    // higher-frequency normal mode
    double omega_minus, q_minus;
};
CoupledModes coupled_modes(double omega_r, double q_r, double omega_f, double q_f, double g_im);

struct ClampingLoss {
    double p_mech;  // [W]
    // Omega E / P; the true clamping Q carries an unknown prefactor
    double q_clamp_proportional;
};
ClampingLoss clamping_loss(const std::vector<double>& dz_samples,
                           const std::vector<double>& area_elements, double v_sound,
                           double density, double omega, double e_mech);
ClampingLoss clamping_loss(const std::vector<double>& dz_samples, double area_element,
                           double v_sound, double density, double omega, double e_mech);

}  // namespace om
