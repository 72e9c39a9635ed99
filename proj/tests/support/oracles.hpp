#pragma once

// Values produced by the scripts in tests/oracles. Do not edit by hand.

namespace fraclab::oracle {

// golden1.py (mpmath, 40 digits)
inline constexpr double kLuxemburgVariable = 2.6424285439764436904;  // f=2 on (0,2), p=2+x/2
inline constexpr double kGagliardoVariable = 0.70690747766534853873;  // f=x, p=2+|x-y|, s=1/4
inline constexpr double kSqrt8Over15 = 0.73029674334022148461;

// conv.py: discrete seminorm of f=x on (0,1), cell midpoints, N cells
inline constexpr double kGagliardoVariableN512 = 0.7068862974942366;
inline constexpr double kGagliardoVariableN1024 = 0.7069000369117293;
inline constexpr double kGagliardoVariableN2048 = 0.7069048592213638;
// error of the constant-p case p=2, s=1/4 against sqrt(8/15)
inline constexpr double kGagliardoErrorN64 = 5.83e-4;
inline constexpr double kGagliardoErrorN512 = 2.50e-5;

// bsemi.py: [x1] on the unit-square boundary, q=2, t=1/4, by facet count
inline constexpr double kBoundarySeminorm32 = 3.196578435600265;
inline constexpr double kBoundarySeminorm64 = 3.2880800704997464;
inline constexpr double kBoundarySeminorm128 = 3.35185461840175;

// sharp.py: p=2, s=1/2, a=0.45, x0=(0.5,0), radius 0.25, 128x128 cells
inline constexpr double kSharpRatios[4] = {0.3765, 0.4268, 0.4926, 0.5769};  // q=3, k=1,2,4,8
inline constexpr double kSharpGrowth = 1.5322;        // ratio(k=8) / ratio(k=1), q=3
inline constexpr double kSharpControlSpread = 1.3076;  // max/min ratio, q=1.5

}  // namespace fraclab::oracle
