"""High-precision reference values frozen into the C++ unit tests.

Every number here is computed from the defining integral or the printed
closed form with mpmath at 40 digits, independently of the library code.
Run: python3 tests/oracles/goldens.py
"""
import mpmath as mp

mp.mp.dps = 40


def dawson(x):
    x = mp.mpf(x)
    return mp.exp(-x * x) * mp.quad(lambda t: mp.exp(t * t), [0, x])


def dawson_c(z):
    # D(z) = sqrt(pi)/2 * exp(-z^2) * erfi(z)
    z = mp.mpc(z)
    return mp.sqrt(mp.pi) / 2 * mp.exp(-z * z) * mp.erfi(z)


def gauss_cauchy(z, s=1):
    rho = lambda l: mp.exp(-l * l / (2 * s * s)) / mp.sqrt(2 * mp.pi * s * s)
    return mp.quad(lambda l: rho(l) / (z - l), [-12 * s, -3 * s, 0, 3 * s, 12 * s])


def show(name, v):
    if isinstance(v, mp.mpc):
        print(f"{name}: {mp.nstr(v.real, 17)} {mp.nstr(v.imag, 17)}")
    else:
        print(f"{name}: {mp.nstr(v, 17)}")


show("dawson(1)", dawson(1))
show("dawson(0.7)", dawson(mp.mpf("0.7")))
show("dawson(0.7+2i)", dawson_c(mp.mpc(0.7, 2)))
show("dawson(3-4.5i)", dawson_c(mp.mpc(3, -4.5)))
show("dawson(10+0.5i)", dawson_c(mp.mpc(10, 0.5)))
show("gaussian G(2i)", gauss_cauchy(mp.mpc(0, 2)))
show("gaussian G(0.5+0.3i)", gauss_cauchy(mp.mpc(0.5, 0.3)))

# order-1 semicircle perturbation of a unit Gaussian: G - a^2 G G'
z0 = mp.mpc("0.5", "0.3")
g = gauss_cauchy(z0)
gp = -mp.quad(lambda l: mp.exp(-l * l / 2) / mp.sqrt(2 * mp.pi) / (z0 - l) ** 2,
              [-12, -3, 0, 3, 12])
a = mp.mpf("0.3")
show("gaussian pert order1 a=0.3 z=0.5+0.3i", g - a * a * g * gp)

# Anderson high-J second order, written as the printed closed form
def anderson2(z, a):
    s = mp.sqrt(z - 2) * mp.sqrt(z + 2)
    return (1 / s) * (1 + a * a * z / s ** 3) + a ** 4 * (z * z + 2) / s ** 15 * (s ** 4 + a * a * z * s) ** 2

show("anderson order2 a=0.1 z=3+0.001i", anderson2(mp.mpc(3, "0.001"), mp.mpf("0.1")))

show("KM eta=3 density(1)", 3 * mp.sqrt(8 - 1) / (2 * mp.pi * (9 - 1)))
al = mp.mpf("0.89")
show("compressed KM eta=3 a=0.89 density(0)", 3 * mp.sqrt(4 * al * (3 - al)) / (2 * mp.pi * al * 9))

arc = lambda l: 1 / (mp.pi * mp.sqrt(4 - l * l))
sc = lambda l: mp.sqrt(4 - l * l) / (2 * mp.pi)
# crossing point where both densities agree
x0 = mp.findroot(lambda l: arc(l) - sc(l), 1.2)
show("crossing", x0)
show("L1(arcsine, semicircle)", 2 * mp.quad(lambda l: abs(arc(l) - sc(l)), [0, x0, 2]))


def dawson_table(path):
    """64 log-spaced real points on [1e-3, 50], D(x) from the defining integral."""
    xs = [mp.mpf(10) ** (mp.mpf(-3) + (mp.log10(50) + 3) * k / 63) for k in range(64)]
    with open(path, "w") as fh:
        fh.write("// x, D(x); generated by tests/oracles/goldens.py\n")
        for x in xs:
            d = mp.exp(-x * x) * mp.quad(lambda t: mp.exp(t * t - x * x) * mp.exp(x * x), [0, x]) if x < 5 else \
                mp.quad(lambda t: mp.exp((t - x) * (t + x)), mp.linspace(0, x, 20))
            fh.write(f"{{{mp.nstr(x, 20)}, {mp.nstr(d, 20)}}},\n")


if __name__ == "__main__":
    import os
    dawson_table(os.path.join(os.path.dirname(__file__), "..", "golden", "dawson_table.inc"))
