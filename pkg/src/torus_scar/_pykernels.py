"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def lattice_image(a, b, c, d, N):
    x1, x2 = np.divmod(np.arange(N * N, dtype=np.int64), N)
    y1 = ((a % N) * x1 + (b % N) * x2) % N
    y2 = ((c % N) * x1 + (d % N) * x2) % N
    return y1 * N + y2


def cycle_decompose(image):
    image = np.asarray(image, dtype=np.int64)
    n = image.shape[0]
    img = image.tolist()
    seen = bytearray(n)
    order = []
    starts = [0]
    for r in range(n):
        if seen[r]:
            continue
        cur = r
        while True:
            cur = img[cur]
            if cur < 0 or cur >= n or seen[cur]:
                raise ValueError("image is not a permutation")
            seen[cur] = 1
            order.append(cur)
            if cur == r:
                break
        starts.append(len(order))
    return np.array(order, dtype=np.int64), np.array(starts, dtype=np.int64)


def apply_monomial(phases, image, psi, nthreads=1):
    if not (len(phases) == len(image) == len(psi)):
        raise ValueError("length mismatch")
    return phases * psi[image]
