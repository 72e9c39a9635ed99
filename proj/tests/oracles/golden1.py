import mpmath as mp
mp.mp.dps = 40
# f = 2 on (0,2), p(x) = 2 + x/2 : find lambda with int_0^2 (2/lam)^(2+x/2) dx = 1
def mod(lam):
    return mp.quad(lambda x: (2/lam)**(2+x/2), [0, 2])
lam = mp.findroot(lambda l: mod(l) - 1, 3)
print("lux_golden", mp.nstr(lam, 20))
# f = x on (0,1), p(x,y) = 2+|x-y|, s=1/4, n=1
def gmod(lam):
    def h(r):
        p = 2 + r
        return 2*(1-r) * r**(p - 1 - p/4) * lam**(-p)
    return mp.quad(h, [0, 1])
lam2 = mp.findroot(lambda l: gmod(l) - 1, 0.7)
print("gag_golden", mp.nstr(lam2, 20))
print("sqrt(8/15)", mp.nstr(mp.sqrt(mp.mpf(8)/15), 20))
