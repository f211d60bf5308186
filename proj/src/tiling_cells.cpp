// Unit cells for the eleven uniform tilings, unit edge length.
//
// Each cell is a connected patch holding one copy of every face orbit under
// the translation lattice, so translated copies share whole edges with their
// neighbours. Coordinates were produced by walking the regular polygons of
// each vertex configuration and are exact to double precision.

#include "macro/tiling.hpp"

namespace macro {

namespace {

const std::array<UnitCell, 11> kCells{
    // S
    UnitCell{
        {1.0, 0.0},
        {0.0, 1.0},
        {
            {-1.0, -1.0},
            {0.0, -1.0},
            {-1.0, 0.0},
            {0.0, 0.0},
        },
        {{0, 1}, {0, 2}, {1, 3}, {2, 3}},
    },
    // T
    UnitCell{
        {1.0, 0.0},
        {0.5, 0.8660254037844386},
        {
            {-0.5, -0.8660254037844386},
            {-1.0, 0.0},
            {0.0, 0.0},
            {-0.5, 0.8660254037844386},
        },
        {{0, 2}, {1, 0}, {1, 2}, {1, 3}, {3, 2}},
    },
    // H
    UnitCell{
        {1.7320508075688772, 0.0},
        {0.8660254037844386, 1.5},
        {
            {0.8660254037844386, -0.5},
            {0.0, 0.0},
            {1.7320508075688772, 0.0},
            {0.0, 1.0},
            {1.7320508075688772, 1.0},
            {0.8660254037844386, 1.5},
        },
        {{0, 2}, {1, 0}, {1, 3}, {2, 4}, {3, 5}, {5, 4}},
    },
    // THTH
    UnitCell{
        {2.0, 0.0},
        {1.0, 1.7320508075688772},
        {
            {-0.5, -0.8660254037844386},
            {-1.0, 0.0},
            {0.0, 0.0},
            {1.0, 0.0},
            {-1.5, 0.8660254037844386},
            {0.5, 0.8660254037844386},
            {-1.0, 1.7320508075688772},
            {0.0, 1.7320508075688772},
        },
        {{0, 2}, {1, 0}, {1, 2}, {1, 4}, {2, 3}, {2, 5}, {3, 5}, {4, 6}, {6, 7}, {7, 5}},
    },
    // SHD
    UnitCell{
        {4.732050807568877, 0.0},
        {2.366025403784439, 4.098076211353315},
        {
            {-0.9999999999999998, -2.7320508075688763},
            {0.9999999999999991, -2.732050807568876},
            {-1.8660254037844388, -2.232050807568876},
            {1.866025403784438, -2.232050807568876},
            {-0.49999999999999983, -1.866025403784439},
            {0.49999999999999917, -1.8660254037844393},
            {-1.366025403784439, -1.3660254037844388},
            {1.3660254037844386, -1.366025403784439},
            {-2.8660254037844375, -0.49999999999999994},
            {-1.866025403784439, -0.5000000000000001},
            {1.866025403784439, -0.49999999999999994},
            {-2.8660254037844375, 0.5},
            {-1.8660254037844388, 0.5000000000000006},
            {1.866025403784439, 0.5},
            {-3.3660254037844375, 1.3660254037844388},
            {-1.3660254037844388, 1.366025403784439},
            {1.366025403784439, 1.3660254037844388},
            {-0.5000000000000002, 1.866025403784439},
            {0.5, 1.866025403784439},
            {-2.866025403784438, 2.232050807568876},
            {-1.8660254037844388, 2.232050807568876},
            {-0.9999999999999996, 2.732050807568876},
            {0.9999999999999998, 2.7320508075688763},
            {-0.49999999999999867, 3.598076211353315},
            {0.4999999999999998, 3.598076211353315},
        },
        {{0, 2}, {0, 4}, {2, 6}, {3, 1}, {4, 5}, {5, 1}, {5, 7}, {6, 4}, {7, 3}, {7, 10}, {8, 9}, {9, 6}, {11, 8}, {11, 12}, {11, 14}, {12, 9}, {13, 10}, {13, 16}, {14, 19}, {15, 12}, {16, 18}, {17, 15}, {18, 17}, {18, 22}, {19, 20}, {20, 15}, {21, 17}, {21, 23}, {23, 24}, {24, 22}},
    },
    // SO2
    UnitCell{
        {2.414213562373095, 0.0},
        {0.0, 2.414213562373095},
        {
            {0.0, -0.7071067811865475},
            {-1.7071067811865475, 0.0},
            {-0.7071067811865475, 0.0},
            {0.7071067811865475, 0.0},
            {-2.414213562373095, 0.7071067811865475},
            {0.0, 0.7071067811865475},
            {-2.414213562373095, 1.7071067811865475},
            {0.0, 1.7071067811865475},
            {-1.7071067811865475, 2.414213562373095},
            {-0.7071067811865475, 2.414213562373095},
        },
        {{1, 2}, {1, 4}, {2, 0}, {3, 0}, {3, 5}, {4, 6}, {5, 2}, {5, 7}, {8, 6}, {8, 9}, {9, 7}},
    },
    // TSHS
    UnitCell{
        {2.732050807568877, 0.0},
        {1.3660254037844386, 2.3660254037844384},
        {
            {-0.4999999999999999, -1.8660254037844384},
            {0.4999999999999998, -1.8660254037844384},
            {-1.3660254037844386, -1.3660254037844384},
            {1.3660254037844386, -1.3660254037844384},
            {0.0, -1.0},
            {-1.8660254037844388, -0.5000000000000004},
            {-0.8660254037844386, -0.5000000000000001},
            {0.8660254037844384, -0.5000000000000004},
            {1.8660254037844386, -0.5000000000000001},
            {-1.8660254037844384, 0.49999999999999994},
            {-0.8660254037844387, 0.49999999999999994},
            {0.8660254037844387, 0.49999999999999994},
            {0.0, 1.0},
        },
        {{0, 1}, {0, 2}, {0, 4}, {2, 6}, {3, 1}, {3, 8}, {4, 1}, {4, 7}, {5, 6}, {6, 4}, {7, 3}, {7, 8}, {9, 5}, {9, 10}, {10, 6}, {11, 7}, {11, 12}, {12, 10}},
    },
    // TD2
    UnitCell{
        {3.732050807568877, 0.0},
        {1.866025403784439, 3.232050807568877},
        {
            {-0.5, -1.8660254037844384},
            {0.49999999999999917, -1.8660254037844393},
            {-2.3660254037844384, -1.366025403784439},
            {-1.366025403784439, -1.3660254037844382},
            {1.3660254037844386, -1.366025403784439},
            {-1.8660254037844382, -0.49999999999999994},
            {1.866025403784439, -0.49999999999999994},
            {-1.8660254037844382, 0.5},
            {1.866025403784439, 0.5},
            {-2.3660254037844384, 1.3660254037844388},
            {-1.366025403784439, 1.366025403784438},
            {1.366025403784439, 1.3660254037844388},
            {-0.49999999999999933, 1.8660254037844382},
            {0.5, 1.866025403784439},
        },
        {{0, 1}, {0, 3}, {1, 4}, {2, 3}, {2, 5}, {4, 6}, {5, 3}, {7, 5}, {7, 9}, {7, 10}, {8, 6}, {8, 11}, {9, 10}, {10, 12}, {11, 13}, {12, 13}},
    },
    // T2STS
    UnitCell{
        {1.9318516525781366, 0.0},
        {0.0, 1.9318516525781366},
        {
            {0.3535533905932738, -1.3194792168823422},
            {-0.35355339059327406, -0.6123724356957942},
            {-1.3194792168823424, -0.35355339059327406},
            {0.6123724356957942, -0.35355339059327406},
            {-0.6123724356957945, 0.3535533905932737},
            {1.3194792168823422, 0.3535533905932737},
            {0.3535533905932738, 0.6123724356957945},
            {-0.35355339059327406, 1.3194792168823424},
            {1.5782982619848624, 1.3194792168823424},
            {0.6123724356957942, 1.5782982619848624},
        },
        {{0, 1}, {0, 3}, {1, 3}, {2, 1}, {2, 4}, {3, 5}, {4, 1}, {4, 7}, {5, 8}, {6, 3}, {6, 4}, {6, 5}, {6, 7}, {6, 9}, {9, 8}},
    },
    // T3S2
    UnitCell{
        {1.0, 0.0},
        {0.5, 1.8660254037844386},
        {
            {-0.5, -0.8660254037844386},
            {0.5, -0.8660254037844386},
            {-1.0, 0.0},
            {0.0, 0.0},
            {-1.0, 1.0},
            {0.0, 1.0},
        },
        {{0, 1}, {0, 3}, {2, 0}, {2, 3}, {2, 4}, {3, 1}, {3, 5}, {4, 5}},
    },
    // T4H
    UnitCell{
        {2.5, 0.8660254037844386},
        {0.5, 2.598076211353316},
        {
            {-1.0, -1.7320508075688774},
            {0.0, -1.7320508075688774},
            {-1.5, -0.8660254037844386},
            {-0.5, -0.8660254037844386},
            {0.5, -0.8660254037844388},
            {1.5, -0.8660254037844388},
            {-1.0, 0.0},
            {1.0, 0.0},
            {-1.5, 0.8660254037844386},
            {-0.5, 0.8660254037844386},
            {0.5, 0.8660254037844386},
            {1.5, 0.8660254037844386},
            {0.0, 1.7320508075688774},
            {1.0, 1.7320508075688772},
        },
        {{0, 3}, {1, 4}, {2, 0}, {2, 3}, {2, 6}, {3, 1}, {3, 4}, {3, 6}, {4, 5}, {4, 7}, {6, 9}, {7, 5}, {7, 10}, {7, 11}, {8, 6}, {8, 9}, {9, 10}, {9, 12}, {10, 11}, {10, 13}, {12, 10}, {13, 11}},
    },
};

} // namespace

const UnitCell& unit_cell(TopologyId id)
{
    return kCells[static_cast<std::size_t>(id)];
}

} // namespace macro
