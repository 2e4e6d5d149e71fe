"""Five-point cross-ratios survive any plane-to-plane projection.

We take a pentagon, push it through a strong perspective map, and compare
the five cross-ratios (one per vertex as origin) before and after. Then we
nudge one vertex and watch the 5% gate reject the pair.
"""

import numpy as np

from pentaverify import Pentagon, apply_homography, pentagon_cross_ratios, pentagons_shape_match

pent = Pentagon.canonical([(120, 80), (300, 60), (380, 210), (240, 330), (90, 250)])
h = np.array([[0.8, 0.25, 40.0],
              [-0.1, 1.1, 15.0],
              [6e-4, -3e-4, 1.0]])
image = Pentagon(tuple(map(tuple, apply_homography(h, pent.array))))

print("vertices in image 1:", pent.vertices)
print("vertices in image 2:", tuple((round(x, 1), round(y, 1)) for x, y in image.vertices))
print("cross-ratios, image 1:", np.round(pentagon_cross_ratios(pent), 6))
print("cross-ratios, image 2:", np.round(pentagon_cross_ratios(image), 6))
print("shape match at 5%:", pentagons_shape_match(pent, image, 0.05))

# move one vertex by about a fifth of the pentagon's size
moved = list(image.vertices)
moved[2] = (moved[2][0] + 60, moved[2][1] - 20)
moved = Pentagon(tuple(moved))
print("after moving one vertex:", np.round(pentagon_cross_ratios(moved), 4))
print("shape match at 5%:", pentagons_shape_match(pent, moved, 0.05))
