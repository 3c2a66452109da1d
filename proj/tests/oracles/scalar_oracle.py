"""Independent scalar reference values frozen into the C++ unit tests.

Plain Python floats and loops only (no numpy, no shared code with the C++
implementation). Run it to regenerate the constants quoted in
tests/unit/test_numeric.cpp, test_layer.cpp and test_model.cpp.
"""
import math


def relu(v):
    return [x if x > 0 else 0.0 for x in v]


def softmax(v):
    m = max(v)
    e = [math.exp(x - m) for x in v]
    s = sum(e)
    return [x / s for x in e]


def affine(W, x, c):
    return [sum(W[r][k] * x[k] for k in range(len(x))) + c[r] for r in range(len(W))]


def layer(W, c, theta, x):
    pre = affine(W, x, c)
    h = relu(pre)
    logits = [sum(theta[k][r] * h[r] for r in range(len(h))) for k in range(len(theta))]
    return pre, h, softmax(logits)


def ce(p, y):
    return -math.log(max(p[y], 1e-12))


print("softmax([1,2]) =", [repr(x) for x in softmax([1.0, 2.0])])
print("ce([0.26894,0.73106],1) =", repr(-math.log(0.73106)))
print("adam one step =", repr(1.0 - 0.01 * 1.0 / (math.sqrt(1.0) + 1e-8)))
print("hedge 0.1*0.99**0.5 =", repr(0.1 * 0.99 ** 0.5))

# Layer fixture shared with test_layer.cpp.
W = [[0.5, -0.2, 0.1], [0.3, 0.8, -0.5], [-0.7, 0.2, 0.4]]
c = [0.1, -0.1, 0.05]
theta = [[0.6, -0.4, 0.2], [-0.3, 0.5, 0.9]]
x = [1.0, 0.5, 0.5]
pre, h, p = layer(W, c, theta, x)
print("layer preact =", [repr(v) for v in pre])
print("layer hidden =", [repr(v) for v in h])
print("layer probs  =", [repr(v) for v in p])

# Tiny network shared with test_model.cpp: S=1, M=1, A=1, E=1, 2 nodes,
# 2 classes, 2 base features. Alphas base .1, middle .2, aux .3, end .4.
Wb = [[0.4, -0.3], [0.2, 0.7]]
cb = [0.05, -0.02]
tb = [[0.3, -0.6], [-0.2, 0.5]]
Wm = [[0.6, 0.1], [-0.4, 0.9]]
cm = [0.0, 0.1]
tm = [[0.8, -0.1], [0.1, 0.4]]
Wa = [[1.2], [-0.8]]
ca = [0.1, 0.3]
ta = [[-0.5, 0.7], [0.4, -0.2]]
We = [[0.3, -0.2, 0.5, 0.1], [0.7, 0.4, -0.6, 0.2]]
ce_ = [0.02, -0.05]
te = [[0.9, -0.3], [-0.4, 0.6]]
alpha = {"base": 0.1, "middle": 0.2, "aux": 0.3, "end": 0.4}
xb = [0.5, -1.5]
xa = 0.8
label = 1


def tiny(aux_on):
    _, hb, pb = layer(Wb, cb, tb, xb)
    _, hm, pm = layer(Wm, cm, tm, hb)
    active = ["base", "middle", "end"] + (["aux"] if aux_on else [])
    tot = sum(alpha[k] for k in active)
    a = {k: alpha[k] / tot for k in active}
    denom = alpha["middle"] + (alpha["aux"] if aux_on else 0.0)
    gm = alpha["middle"] / denom
    end_in = [gm * hm[0], gm * hm[1]]
    probs = {"base": pb, "middle": pm}
    if aux_on:
        _, ha, pa = layer(Wa, ca, ta, [xa])
        ga = alpha["aux"] / denom
        end_in += [ga * ha[0], ga * ha[1]]
        probs["aux"] = pa
        We_used = We
    else:
        We_used = [row[:2] for row in We]
    _, he, pe = layer(We_used, ce_, te, end_in)
    probs["end"] = pe
    F = [sum(a[k] * probs[k][j] for k in active) for j in range(2)]
    loss = sum(a[k] * ce(probs[k], label) for k in active)
    return F, loss


for on in (True, False):
    F, loss = tiny(on)
    print("tiny aux_on=%s F =" % on, [repr(v) for v in F], "loss =", repr(loss))
