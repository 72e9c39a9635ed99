import numpy as np
from scipy.optimize import brentq
def facets(N):
    h=1.0/N; c=(np.arange(N)+0.5)*h
    P = np.concatenate([np.stack([c,0*c],1), np.stack([0*c+1,c],1), np.stack([c[::-1],0*c+1],1), np.stack([0*c,c[::-1]],1)])
    return P, np.full(4*N, h)
for N in [8,16,32]:
    P,w = facets(N); f = P[:,0]
    D = np.linalg.norm(P[:,None,:]-P[None,:,:],axis=2); m = ~np.eye(len(w),dtype=bool)
    F = np.abs(f[:,None]-f[None,:]); W = w[:,None]*w[None,:]
    A = np.sum((W*F**2/D**(2+0.25*2))[m])
    print(4*N, np.sqrt(A))
