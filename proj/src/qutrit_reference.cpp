#include "chansim/qutrit_reference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chansim {

namespace {

void check_range(double v, double hi, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > hi) {
    throw std::invalid_argument(std::string("QutritRefParams: ") + name + " out of range");
  }
}

void check_su3(const Su3Angles& r) {
  for (double t : r.theta) check_range(t, kPi / 2, "theta");
  for (double p : r.phi) check_range(p, kTwoPi, "phi");
}

Complex e(double x) { return std::polar(1.0, x); }

Su3Angles su3(double t1, double t2, double t3, double f1, double f2, double f3, double f4, double f5) {
  return Su3Angles{{t1, t2, t3}, {f1, f2, f3, f4, f5}};
}

QutritRefParams component(std::array<double, 6> abcdef, Su3Angles r1, Su3Angles r2, Su3Angles r3) {
  QutritRefParams q;
  q.a = abcdef[0];
  q.b = abcdef[1];
  q.c = abcdef[2];
  q.d = abcdef[3];
  q.e = abcdef[4];
  q.f = abcdef[5];
  q.r1 = r1;
  q.r2 = r2;
  q.r3 = r3;
  return q;
}

ComplexMatrix from_rows(const Complex (&rows)[9][9]) {
  ComplexMatrix m(9, 9);
  for (int r = 0; r < 9; ++r) {
    for (int c = 0; c < 9; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

// Transcribed at four decimals.
const Complex kTargetRows[9][9] = {
    {{0.3105, 0.0000}, {0.1052, 0.0154}, {0.0394, -0.0099}, {0.0554, 0.0013}, {-0.0892, -0.0667}, {0.0185, 0.0149}, {-0.0070, 0.0066}, {-0.1068, 0.1226}, {0.1131, 0.0192}},
    {{0.1052, -0.0154}, {0.2526, 0.0000}, {-0.0174, 0.0148}, {0.0715, -0.0388}, {-0.0307, -0.0814}, {-0.1021, 0.0296}, {-0.0250, 0.0841}, {0.0778, -0.0614}, {-0.0717, 0.0218}},
    {{0.0394, 0.0099}, {-0.0174, -0.0148}, {0.2473, 0.0000}, {0.0302, 0.0637}, {0.0600, 0.0425}, {0.0800, 0.1476}, {-0.0986, 0.0101}, {0.0475, -0.0007}, {-0.0440, 0.0073}},
    {{0.0554, -0.0013}, {0.0715, 0.0388}, {0.0302, -0.0637}, {0.2891, 0.0000}, {-0.0066, -0.0301}, {-0.0147, 0.0141}, {-0.0501, -0.0559}, {0.1728, -0.0571}, {0.1132, 0.0481}},
    {{-0.0892, 0.0667}, {-0.0307, 0.0814}, {0.0600, -0.0425}, {-0.0066, 0.0301}, {0.2667, 0.0000}, {0.0816, 0.0849}, {-0.0968, 0.1558}, {0.0234, -0.0100}, {-0.0568, -0.0703}},
    {{0.0185, -0.0149}, {-0.1021, -0.0296}, {0.0800, -0.1476}, {-0.0147, -0.0141}, {0.0816, -0.0849}, {0.3716, 0.0000}, {0.0306, 0.1539}, {-0.1073, -0.0026}, {0.0882, 0.0653}},
    {{-0.0070, -0.0066}, {-0.0250, -0.0841}, {-0.0986, -0.0101}, {-0.0501, 0.0559}, {-0.0968, -0.1558}, {0.0306, -0.1539}, {0.4004, 0.0000}, {-0.0986, 0.0147}, {-0.0247, -0.0042}},
    {{-0.1068, -0.1226}, {0.0778, 0.0614}, {0.0475, 0.0007}, {0.1728, 0.0571}, {0.0234, 0.0100}, {-0.1073, 0.0026}, {-0.0986, -0.0147}, {0.4807, 0.0000}, {-0.0641, -0.0998}},
    {{0.1131, -0.0192}, {-0.0717, -0.0218}, {-0.0440, -0.0073}, {0.1132, -0.0481}, {-0.0568, 0.0703}, {0.0882, -0.0653}, {-0.0247, 0.0042}, {-0.0641, 0.0998}, {0.3811, 0.0000}},
};

const Complex kApproxRows[9][9] = {
    {{0.3103, 0.0000}, {0.1082, 0.0119}, {0.0386, -0.0089}, {0.0559, 0.0007}, {-0.0859, -0.0676}, {0.0207, 0.0164}, {-0.0090, 0.0044}, {-0.1058, 0.1225}, {0.1126, 0.0218}},
    {{0.1082, -0.0119}, {0.2522, 0.0000}, {-0.0243, 0.0256}, {0.0726, -0.0333}, {-0.0393, -0.0777}, {-0.0922, 0.0272}, {-0.0260, 0.0903}, {0.0797, -0.0632}, {-0.0676, 0.0221}},
    {{0.0386, 0.0089}, {-0.0243, -0.0256}, {0.2520, 0.0000}, {0.0309, 0.0603}, {0.0645, 0.0313}, {0.0765, 0.1407}, {-0.1034, 0.0120}, {0.0461, 0.0006}, {-0.0414, 0.0107}},
    {{0.0559, -0.0007}, {0.0726, 0.0333}, {0.0309, -0.0603}, {0.2951, 0.0000}, {-0.0095, -0.0290}, {-0.0133, 0.0100}, {-0.0521, -0.0552}, {0.1708, -0.0550}, {0.1136, 0.0481}},
    {{-0.0859, 0.0676}, {-0.0393, 0.0777}, {0.0645, -0.0313}, {-0.0095, 0.0290}, {0.2677, 0.0000}, {0.0871, 0.0753}, {-0.0975, 0.1628}, {0.0246, -0.0135}, {-0.0505, -0.0714}},
    {{0.0207, -0.0164}, {-0.0922, -0.0272}, {0.0765, -0.1407}, {-0.0133, -0.0100}, {0.0871, -0.0753}, {0.3731, 0.0000}, {0.0329, 0.1523}, {-0.1037, -0.0034}, {0.0828, 0.0638}},
    {{-0.0090, -0.0044}, {-0.0260, -0.0903}, {-0.1034, -0.0120}, {-0.0521, 0.0552}, {-0.0975, -0.1628}, {0.0329, -0.1523}, {0.3946, 0.0000}, {-0.0987, 0.0171}, {-0.0253, -0.0012}},
    {{-0.1058, -0.1225}, {0.0797, 0.0632}, {0.0461, -0.0006}, {0.1708, 0.0550}, {0.0246, 0.0135}, {-0.1037, 0.0034}, {-0.0987, -0.0171}, {0.4802, 0.0000}, {-0.0628, -0.1009}},
    {{0.1126, -0.0218}, {-0.0676, -0.0221}, {-0.0414, -0.0107}, {0.1136, -0.0481}, {-0.0505, 0.0714}, {0.0828, -0.0638}, {-0.0253, 0.0012}, {-0.0628, 0.1009}, {0.3749, 0.0000}},
};

}  // namespace

void QutritRefParams::validate() const {
  for (double v : {a, b, c, d, e, f}) check_range(v, kTwoPi, "a..f");
  check_su3(r1);
  check_su3(r2);
  check_su3(r3);
}

ComplexMatrix su3_matrix(const Su3Angles& angles) {
  const double c1 = std::cos(angles.theta[0]), s1 = std::sin(angles.theta[0]);
  const double c2 = std::cos(angles.theta[1]), s2 = std::sin(angles.theta[1]);
  const double c3 = std::cos(angles.theta[2]), s3 = std::sin(angles.theta[2]);
  const auto& [f1, f2, f3, f4, f5] = angles.phi;
  ComplexMatrix m(3, 3);
  m(0, 0) = e(f1) * c1 * c2;
  m(0, 1) = e(f3) * s1;
  m(0, 2) = e(f4) * c1 * s2;
  m(1, 0) = e(-f4 - f5) * s2 * s3 - e(f1 + f2 - f3) * s1 * c2 * c3;
  m(1, 1) = e(f2) * c1 * c3;
  m(1, 2) = -e(-f1 - f5) * c2 * s3 - e(f2 - f3 + f4) * s1 * s2 * c3;
  m(2, 0) = -e(-f2 - f4) * s2 * c3 - e(f1 - f3 + f5) * s1 * c2 * s3;
  m(2, 1) = e(f5) * c1 * s3;
  m(2, 2) = e(-f1 - f2) * c2 * c3 - e(-f3 + f4 + f5) * s1 * s2 * s3;
  return m;
}

std::array<ComplexMatrix, 3> qutrit_reference_f(const QutritRefParams& q) {
  q.validate();
  using std::cos;
  using std::sin;
  std::array<ComplexMatrix, 3> f;
  for (auto& m : f) m = ComplexMatrix::Zero(3, 3);
  f[0](0, 0) = cos(q.a) * cos(q.c);
  f[0](1, 1) = cos(q.b);
  f[0](2, 2) = cos(q.d);
  f[1](0, 1) = sin(q.b) * cos(q.e);
  f[1](1, 2) = -sin(q.d) * sin(q.f);
  f[1](2, 0) = sin(q.a);
  f[2](0, 2) = sin(q.d) * cos(q.f);
  f[2](1, 0) = cos(q.a) * sin(q.c);
  f[2](2, 1) = sin(q.b) * sin(q.e);
  return f;
}

KrausChannel qutrit_reference_kraus(const QutritRefParams& q) {
  const auto f = qutrit_reference_f(q);
  const ComplexMatrix r1 = su3_matrix(q.r1);
  const ComplexMatrix prior = su3_matrix(q.r2) * su3_matrix(q.r3);
  std::vector<ComplexMatrix> ops;
  ops.reserve(3);
  for (const auto& fi : f) ops.push_back(r1 * fi * prior);
  return KrausChannel(3, std::move(ops));
}

const ReferenceMixture& table1() {
  static const ReferenceMixture mix{
      {component({2.1417, 4.8284, 2.3434, 4.0164, 2.7418, 3.1900},
                 su3(1.2344, 1.2781, 0.6618, 1.1865, 4.1535, 1.6894, 0.8490, 4.7523),
                 su3(0.2292, 0.6352, 0.4768, 4.0185, 3.3050, 5.0089, 2.1711, 3.6288),
                 su3(0.9562, 0.1978, 0.5194, 2.6995, 5.1831, 2.1618, 3.9187, 1.2381)),
       component({2.3442, 1.8620, 4.7272, 2.2822, 4.0726, 4.8792},
                 su3(0.6197, 1.1258, 0.9545, 4.0777, 1.8561, 3.6516, 4.9058, 2.2728),
                 su3(0.3668, 0.4069, 0.0651, 1.8266, 4.9335, 2.8210, 2.1526, 3.1790),
                 su3(1.1377, 1.1456, 1.4608, 3.9186, 2.3296, 4.3385, 5.4539, 3.1468)),
       component({2.0610, 3.9621, 1.6220, 1.0321, 2.5719, 5.2118},
                 su3(0.3082, 0.6092, 1.4406, 4.9068, 5.4269, 2.6902, 2.8977, 0.6585),
                 su3(1.1345, 0.5117, 0.6749, 4.7498, 3.1036, 5.3635, 4.5586, 3.6124),
                 su3(0.3574, 1.1794, 0.3582, 2.1275, 2.5366, 5.1105, 3.3091, 2.2142))},
      {0.2974, 0.3676, 0.3350}};
  return mix;
}

const std::array<std::array<double, 3>, 3>& table1_eigenvalues() {
  static const std::array<std::array<double, 3>, 3> values{
      {{0.5667, 0.8868, 1.5465}, {0.5088, 1.0942, 1.3970}, {0.5457, 0.7287, 1.7256}}};
  return values;
}

ChoiState table1_mixture() {
  const auto& mix = table1();
  ComplexMatrix acc = ComplexMatrix::Zero(9, 9);
  for (std::size_t i = 0; i < 3; ++i) {
    acc += mix.probabilities[i] * choi_matrix(qutrit_reference_kraus(mix.components[i]).kraus_ops());
  }
  return ChoiState(3, std::move(acc), kPrintedTolerances);
}

ChoiState appendix_b_target() { return ChoiState(3, from_rows(kTargetRows), kPrintedTolerances); }

ChoiState appendix_b_approximation() { return ChoiState(3, from_rows(kApproxRows), kPrintedTolerances); }

const std::array<double, 9>& appendix_b_target_eigenvalues() {
  static const std::array<double, 9> values{0.0018, 0.0244, 0.0662, 0.1366, 0.2499,
                                            0.4415, 0.5808, 0.6519, 0.8469};
  return values;
}

const std::array<double, 9>& appendix_b_approximation_eigenvalues() {
  static const std::array<double, 9> values{0.0039, 0.0280, 0.0797, 0.1264, 0.2473,
                                            0.4395, 0.5825, 0.6515, 0.8413};
  return values;
}

}  // namespace chansim
