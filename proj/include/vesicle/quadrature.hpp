#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace vesicle {

// Symmetric Gauss rules on the reference triangle in barycentric coordinates.
// Weights sum to 1 and are scaled by the physical element area at use.
struct QuadratureRule {
    struct Point {
        std::array<double, 3> bary;
        double weight;
    };
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
};

// npoints selects the rule: 3 (degree 2), 6 (degree 4), 7 (degree 5).
inline QuadratureRule triangle_rule(int npoints) {
    QuadratureRule rule;
    switch (npoints) {
        case 3:
            rule.points = {{{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
                           {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
                           {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0}};
            break;
        case 6: {
            const double a1 = 0.816847572980459, b1 = 0.091576213509771, w1 = 0.109951743655322;
            const double a2 = 0.108103018168070, b2 = 0.445948490915965, w2 = 0.223381589678011;
            rule.points = {{{a1, b1, b1}, w1}, {{b1, a1, b1}, w1}, {{b1, b1, a1}, w1},
                           {{a2, b2, b2}, w2}, {{b2, a2, b2}, w2}, {{b2, b2, a2}, w2}};
            break;
        }
        case 7: {
            const double w0 = 9.0 / 40.0;
            const double a1 = (6.0 - std::sqrt(15.0)) / 21.0;
            const double w1 = (155.0 - std::sqrt(15.0)) / 1200.0;
            const double a2 = (6.0 + std::sqrt(15.0)) / 21.0;
            const double w2 = (155.0 + std::sqrt(15.0)) / 1200.0;
            const double c1 = 1.0 - 2.0 * a1, c2 = 1.0 - 2.0 * a2;
            rule.points = {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w0},
                           {{c1, a1, a1}, w1}, {{a1, c1, a1}, w1}, {{a1, a1, c1}, w1},
                           {{c2, a2, a2}, w2}, {{a2, c2, a2}, w2}, {{a2, a2, c2}, w2}};
            break;
        }
        default:
            throw std::invalid_argument("triangle_rule: supported point counts are 3, 6, 7");
    }
    return rule;
}

}  // namespace vesicle
