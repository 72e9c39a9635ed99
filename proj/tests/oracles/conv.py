import numpy as np
from scipy.optimize import brentq
def gag_terms(N, f, pfun, s):
    h = 1.0/N; x = (np.arange(N)+0.5)*h
    X, Y = np.meshgrid(x, x, indexing='ij')
    D = np.abs(X-Y); F = np.abs(f(X)-f(Y)); P = pfun(X, Y)
    m = ~np.eye(N, dtype=bool)
    return h*h, D[m], F[m], P[m]
def gag_norm(N, f, pfun, s):
    w, D, F, P = gag_terms(N, f, pfun, s)
    coef = w * F**P / D**(1+s*P)
    g = lambda lam: np.sum(coef * lam**(-P)) - 1
    return brentq(g, 1e-3, 1e3, xtol=1e-15, rtol=1e-15)
ex = np.sqrt(8/15)
prev = None
for N in [64,128,256,512]:
    v = gag_norm(N, lambda x: x, lambda X,Y: 2+0*X, 0.25)
    e = abs(v-ex)
    print(N, v, e, (e/prev if prev else None)); prev = e
g2 = 0.70690747766534853873
prev=None
for N in [256,512,1024,2048]:
    v = gag_norm(N, lambda x: x, lambda X,Y: 2+np.abs(X-Y), 0.25)
    e = abs(v-g2); print("var", N, v, e, (e/prev if prev else None)); prev=e
