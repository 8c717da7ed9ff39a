#  Copyright 2026 The slipcert Authors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.

# Independent high-precision evaluation of fixture values used by the C++ tests.
# Run: python3 tests/oracles/fixtures.py
from mpmath import mp, mpf, asin, sqrt, pi, quad, sin, cos, floor, exp

mp.dps = 40

def pll_q(T, s, beta, h0):
    A = mpf(7) / 2 * beta**2 + 3
    B = 3 * (1 - s) * (1 + beta) * (3 * beta + 1)
    C = mpf(3) / 2 * (1 - s)**2 * (1 + beta)**2
    return T**2 * (A + B * h0 + C * h0**2)

T, s, h0 = mpf('0.1'), mpf('0.4'), mpf(1)
g0 = max(s * h0**2 / 2, (h0 + 1 - s)**2 / 2)
two_sqrt_ed = 1 - g0 * T**4
print("gamma0", g0, "2sqrt(eps*delta)", two_sqrt_ed)
for beta in ('0.9', '0.92', '0.95'):
    b = mpf(beta)
    q = pll_q(T, s, b, h0)
    S = b * asin(b) + sqrt(1 - b**2)
    D = 4 * two_sqrt_ed * S - 2 * pi * b
    print("beta", beta, "q", mp.nstr(q, 20), "q/D", mp.nstr(q / D, 12), "r0", int(floor(q / D)))

b = mpf('0.9')
phi = lambda x: sin(x) - b
r1, r2 = pi - asin(b), 2 * pi + asin(b)
roots = [asin(b), pi - asin(b)]
int_abs = quad(lambda x: abs(phi(x)), [0, roots[0], roots[1], 2 * pi])
print("int_abs(0.9)", mp.nstr(int_abs, 20), "closed", mp.nstr(4 * (b * asin(b) + sqrt(1 - b**2)), 20))
int_abs_Phi = quad(lambda x: abs(phi(x)) * abs(sin(x)), [0, roots[0], pi/2, roots[1], pi, 2 * pi])
print("int_abs_Phi(0.9)", mp.nstr(int_abs_Phi, 20))
eps, tau = mpf(1), mpf(1)
int_abs_P = quad(lambda x: abs(phi(x)) * sqrt(eps + tau * sin(x)**2), [0, roots[0], pi/2, roots[1], pi, 3*pi/2, 2 * pi])
print("int_abs_P(0.9, eps=1,tau=1)", mp.nstr(int_abs_P, 20))
qv = pll_q(T, s, b, h0)
print("r_1 example", mp.nstr((-2 * pi * b - qv) / int_abs, 20))
print("r_2 example", mp.nstr((-2 * pi * b + qv) / int_abs, 20))

# lemma2 q example and q3 example
print("lemma2 example", 1 + 2 * 1 + mpf('0.5'))
# confluent convolution: gamma(t)=e^{-t}, mu=1: (1/mu) int_0^t e^{(l-t)/mu} e^{-l} dl = t e^{-t}
t = mpf('0.7')
print("gamma_mu(0.7)", mp.nstr(quad(lambda l: exp((l - t)) * exp(-l), [0, t]), 20), mp.nstr(t * exp(-t), 20))
