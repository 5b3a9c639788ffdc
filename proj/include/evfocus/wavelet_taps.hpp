// Embedded copy of data/wavelets.taps (generated; keep the two in sync --
// the test suite diffs this string against the data file).
#pragma once

namespace evfocus::detail {

inline constexpr const char* kWaveletTapsText = R"TAPS(
# evfocus wavelet filter banks, decimal text, one bank per 'wavelet' stanza.
# dmey: 62-tap FIR discrete Meyer filter. Derivation: ideal Meyer conjugate
#   mirror filter H(w) = sqrt(2)*cos(pi/2 * nu(3|w|/pi - 1)),
#   nu(x) = x^4(35 - 84x + 70x^2 - 20x^3), sampled on a 2^18 FFT grid,
#   truncated to +/-30 taps (plus one leading zero tap), then projected to
#   the nearest filter satisfying double-shift orthogonality and zero
#   highpass DC response at machine precision (SLSQP + Gauss-Newton).
#   The plain symmetric truncation is NOT exactly orthogonal (defect ~8e-6);
#   the projection moves no tap by more than 1.2e-4.
# db4: 8-tap Daubechies orthogonal filter, derived by spectral factorization
#   of the Daubechies half-band polynomial at 50-digit precision (mpmath),
#   minimum-phase root selection, sum normalized to sqrt(2).
format 1
wavelet dmey 62
lo_d -3.7752015914089367e-06 2.6944115024210126e-05 -1.9546170135584562e-07 5.7155318040508985e-05 3.7770197087730738e-05 9.1616539127391502e-06 -2.9514065309395918e-05 2.8710573605051242e-05 -4.9479516121426803e-06 -1.788750322197285e-05 5.7369620419442681e-05 -4.2037670462304745e-05 -0.00012120610828515884 -9.7292177094686751e-05 0.0001986587031315546 0.00081877983473381186 -0.00058515858797373579 -0.0026812502517982715 0.0021572476642669324 0.006059901508300122 -0.006399033804960221 -0.011060364916237037 0.015287835418086841 0.017386832497979156 -0.032053839303825715 -0.024325774911495242 0.063684766898174441 0.030618955489092471 -0.13269144306567668 -0.035052010562076366 0.44409852742646527 0.74374652082562376 0.44409871647687205 -0.035052913181762319 -0.13269173749648561 0.030609337291384934 0.063671174418577128 -0.024346897957741843 -0.032097870465776043 0.017380075045802679 0.015249173259542899 -0.011047876455004034 -0.0063723811047950224 0.0060453588922781869 0.0021981832887308858 -0.0026811815337494669 -0.0005863747615102667 0.00086156639884192934 0.00020583741734851751 -0.00015640247007951951 -0.00018904248610021582 2.2865450128895612e-05 0.00014918204544406424 -2.1434659022066802e-05 -3.6561464845149478e-06 -3.9602789095401615e-05 -1.216011081670126e-05 6.4883380515570559e-05 -0.00010041634162039694 -1.0477215041290146e-06 -4.4909183075803608e-05 -6.2923283716800874e-06
hi_d 6.2923283716800874e-06 -4.4909183075803608e-05 1.0477215041290146e-06 -0.00010041634162039694 -6.4883380515570559e-05 -1.216011081670126e-05 3.9602789095401615e-05 -3.6561464845149478e-06 2.1434659022066802e-05 0.00014918204544406424 -2.2865450128895612e-05 -0.00018904248610021582 0.00015640247007951951 0.00020583741734851751 -0.00086156639884192934 -0.0005863747615102667 0.0026811815337494669 0.0021981832887308858 -0.0060453588922781869 -0.0063723811047950224 0.011047876455004034 0.015249173259542899 -0.017380075045802679 -0.032097870465776043 0.024346897957741843 0.063671174418577128 -0.030609337291384934 -0.13269173749648561 0.035052913181762319 0.44409871647687205 -0.74374652082562376 0.44409852742646527 0.035052010562076366 -0.13269144306567668 -0.030618955489092471 0.063684766898174441 0.024325774911495242 -0.032053839303825715 -0.017386832497979156 0.015287835418086841 0.011060364916237037 -0.006399033804960221 -0.006059901508300122 0.0021572476642669324 0.0026812502517982715 -0.00058515858797373579 -0.00081877983473381186 0.0001986587031315546 9.7292177094686751e-05 -0.00012120610828515884 4.2037670462304745e-05 5.7369620419442681e-05 1.788750322197285e-05 -4.9479516121426803e-06 -2.8710573605051242e-05 -2.9514065309395918e-05 -9.1616539127391502e-06 3.7770197087730738e-05 -5.7155318040508985e-05 -1.9546170135584562e-07 -2.6944115024210126e-05 -3.7752015914089367e-06
lo_r -6.2923283716800874e-06 -4.4909183075803608e-05 -1.0477215041290146e-06 -0.00010041634162039694 6.4883380515570559e-05 -1.216011081670126e-05 -3.9602789095401615e-05 -3.6561464845149478e-06 -2.1434659022066802e-05 0.00014918204544406424 2.2865450128895612e-05 -0.00018904248610021582 -0.00015640247007951951 0.00020583741734851751 0.00086156639884192934 -0.0005863747615102667 -0.0026811815337494669 0.0021981832887308858 0.0060453588922781869 -0.0063723811047950224 -0.011047876455004034 0.015249173259542899 0.017380075045802679 -0.032097870465776043 -0.024346897957741843 0.063671174418577128 0.030609337291384934 -0.13269173749648561 -0.035052913181762319 0.44409871647687205 0.74374652082562376 0.44409852742646527 -0.035052010562076366 -0.13269144306567668 0.030618955489092471 0.063684766898174441 -0.024325774911495242 -0.032053839303825715 0.017386832497979156 0.015287835418086841 -0.011060364916237037 -0.006399033804960221 0.006059901508300122 0.0021572476642669324 -0.0026812502517982715 -0.00058515858797373579 0.00081877983473381186 0.0001986587031315546 -9.7292177094686751e-05 -0.00012120610828515884 -4.2037670462304745e-05 5.7369620419442681e-05 -1.788750322197285e-05 -4.9479516121426803e-06 2.8710573605051242e-05 -2.9514065309395918e-05 9.1616539127391502e-06 3.7770197087730738e-05 5.7155318040508985e-05 -1.9546170135584562e-07 2.6944115024210126e-05 -3.7752015914089367e-06
hi_r -3.7752015914089367e-06 -2.6944115024210126e-05 -1.9546170135584562e-07 -5.7155318040508985e-05 3.7770197087730738e-05 -9.1616539127391502e-06 -2.9514065309395918e-05 -2.8710573605051242e-05 -4.9479516121426803e-06 1.788750322197285e-05 5.7369620419442681e-05 4.2037670462304745e-05 -0.00012120610828515884 9.7292177094686751e-05 0.0001986587031315546 -0.00081877983473381186 -0.00058515858797373579 0.0026812502517982715 0.0021572476642669324 -0.006059901508300122 -0.006399033804960221 0.011060364916237037 0.015287835418086841 -0.017386832497979156 -0.032053839303825715 0.024325774911495242 0.063684766898174441 -0.030618955489092471 -0.13269144306567668 0.035052010562076366 0.44409852742646527 -0.74374652082562376 0.44409871647687205 0.035052913181762319 -0.13269173749648561 -0.030609337291384934 0.063671174418577128 0.024346897957741843 -0.032097870465776043 -0.017380075045802679 0.015249173259542899 0.011047876455004034 -0.0063723811047950224 -0.0060453588922781869 0.0021981832887308858 0.0026811815337494669 -0.0005863747615102667 -0.00086156639884192934 0.00020583741734851751 0.00015640247007951951 -0.00018904248610021582 -2.2865450128895612e-05 0.00014918204544406424 2.1434659022066802e-05 -3.6561464845149478e-06 3.9602789095401615e-05 -1.216011081670126e-05 -6.4883380515570559e-05 -0.00010041634162039694 1.0477215041290146e-06 -4.4909183075803608e-05 6.2923283716800874e-06
wavelet db4 8
lo_d -0.010597401785069032 0.032883011666885197 0.030841381835560764 -0.18703481171909309 -0.027983769416859854 0.63088076792985892 0.71484657055291567 0.23037781330889651
hi_d -0.23037781330889651 0.71484657055291567 -0.63088076792985892 -0.027983769416859854 0.18703481171909309 0.030841381835560764 -0.032883011666885197 -0.010597401785069032
lo_r 0.23037781330889651 0.71484657055291567 0.63088076792985892 -0.027983769416859854 -0.18703481171909309 0.030841381835560764 0.032883011666885197 -0.010597401785069032
hi_r -0.010597401785069032 -0.032883011666885197 0.030841381835560764 0.18703481171909309 -0.027983769416859854 -0.63088076792985892 0.71484657055291567 -0.23037781330889651
)TAPS";

}  // namespace evfocus::detail
