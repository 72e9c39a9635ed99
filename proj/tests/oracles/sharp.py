import numpy as np
from scipy.signal import fftconvolve
from scipy.optimize import brentq
def bump(z2):
    out = np.zeros_like(z2); m = z2 < 1
    out[m] = np.exp(1.0/(z2[m]-1.0)); return out
def fk(X1, X2, k, a, x0, delta):
    z2 = ((k*(X1-x0[0])/delta)**2 + (k*(X2-x0[1])/delta)**2)
    return k**a * bump(z2)
def run(N, k, a, q, delta, x0=(0.5,0.0), s=0.5):
    h = 1.0/N; c = (np.arange(N)+0.5)*h
    X1, X2 = np.meshgrid(c, c, indexing='ij')
    F = fk(X1, X2, k, a, x0, delta)
    # seminorm p=2: sum_{i!=j} h^4 (f_i-f_j)^2 / d^{2+2s}
    o = np.arange(-(N-1), N)*h
    O1, O2 = np.meshgrid(o, o, indexing='ij')
    D = np.sqrt(O1**2+O2**2); K = np.zeros_like(D); m = D > 0
    K[m] = h**4 / D[m]**(2+2*s)
    one = np.ones_like(F)
    C = fftconvolve(F, F[::-1, ::-1], mode='full')
    S2 = fftconvolve(F*F, one[::-1, ::-1], mode='full')
    S2p = fftconvolve(one, (F*F)[::-1, ::-1], mode='full')
    A = np.sum(K*(S2+S2p-2*C))
    semi = np.sqrt(max(A, 0))
    l2 = np.sqrt(np.sum(h*h*F*F))
    # boundary facets: bottom x2=0, top x2=1, left x1=0, right x1=1
    fb = np.concatenate([fk(c, 0*c, k, a, x0, delta), fk(0*c+1, c, k, a, x0, delta),
                         fk(c, 0*c+1, k, a, x0, delta), fk(0*c, c, k, a, x0, delta)])
    fb = np.abs(fb)
    M = fb.max()
    if M == 0: bn = 0
    else:
        g = lambda mu: np.sum(h*(fb/M)**q * mu**(-q)) - 1
        bn = M*brentq(g, 1e-8, 1e8, xtol=1e-15, rtol=1e-15)
    return bn, l2, semi, bn/(l2+semi)
import sys
for delta in [0.25, 0.5, 1.0]:
    for N in [128, 256]:
        rs = [run(N, k, 0.45, 3.0, delta)[3] for k in [1,2,4,8]]
        rc = [run(N, k, 0.45, 1.5, delta)[3] for k in [1,2,4,8]]
        print(delta, N, "super", ["%.4f"%r for r in rs], "fac %.4f"%(rs[-1]/rs[0]), "ctrl maxmin %.4f"%(max(rc)/min(rc)))
