#include "stainbary/exact_ot.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "stainbary/errors.hpp"

// Transportation simplex: northwest-corner start, MODI duals, Bland's rule
// for the entering cell, pivot along the unique cycle in the basis tree.

namespace stainbary {

namespace {

struct Cell {
    int i = 0;
    int j = 0;
    double value = 0.0;
};

// Northwest-corner initial basic feasible solution. Advancing one index per
// step yields exactly n + m - 1 basic cells, zero-valued ones included.
std::vector<Cell> northwestCorner(Eigen::VectorXd a, Eigen::VectorXd b)
{
    const int n = int(a.size());
    const int m = int(b.size());
    std::vector<Cell> basis;
    basis.reserve(n + m - 1);

    int i = 0, j = 0;
    while (true) {
        const double take = std::min(a(i), b(j));
        basis.push_back({i, j, take});
        a(i) -= take;
        b(j) -= take;
        if (i == n - 1 && j == m - 1)
            break;
        if (a(i) <= b(j) && i < n - 1)
            ++i;
        else if (j < m - 1)
            ++j;
        else
            ++i;
    }
    return basis;
}

// Dual variables from the basis tree: u_i + v_j = C_ij on basic cells, u_0 = 0.
void computeDuals(const std::vector<Cell>& basis, const CostMatrix& cost,
                  int n, int m, Eigen::VectorXd& u, Eigen::VectorXd& v)
{
    u.setZero(n);
    v.setZero(m);
    std::vector<char> knownRow(n, 0), knownCol(m, 0);
    knownRow[0] = 1;

    std::vector<std::vector<int>> rowCells(n), colCells(m);
    for (int k = 0; k < int(basis.size()); ++k) {
        rowCells[basis[k].i].push_back(k);
        colCells[basis[k].j].push_back(k);
    }

    std::deque<int> queue;  // node ids: rows 0..n-1, cols n..n+m-1
    queue.push_back(0);
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        if (node < n) {
            for (int k : rowCells[node]) {
                const int j = basis[k].j;
                if (!knownCol[j]) {
                    v(j) = cost(node, j) - u(node);
                    knownCol[j] = 1;
                    queue.push_back(n + j);
                }
            }
        } else {
            const int j = node - n;
            for (int k : colCells[j]) {
                const int i = basis[k].i;
                if (!knownRow[i]) {
                    u(i) = cost(i, j) - v(j);
                    knownRow[i] = 1;
                    queue.push_back(i);
                }
            }
        }
    }
}

// Unique cycle closed by the entering cell: the tree path from its column
// node back to its row node, as a sequence of basis-cell indices.
std::vector<int> cyclePath(const std::vector<Cell>& basis, int n, int m,
                           int enterRow, int enterCol)
{
    const int nodes = n + m;
    std::vector<std::vector<std::pair<int, int>>> adj(nodes);  // (neighbor, cell index)
    for (int k = 0; k < int(basis.size()); ++k) {
        const int r = basis[k].i;
        const int c = n + basis[k].j;
        adj[r].push_back({c, k});
        adj[c].push_back({r, k});
    }

    std::vector<int> parentEdge(nodes, -1), parentNode(nodes, -1);
    std::vector<char> seen(nodes, 0);
    std::deque<int> queue;
    const int start = n + enterCol;
    const int goal = enterRow;
    seen[start] = 1;
    queue.push_back(start);
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        if (node == goal)
            break;
        for (const auto& [next, edge] : adj[node]) {
            if (!seen[next]) {
                seen[next] = 1;
                parentNode[next] = node;
                parentEdge[next] = edge;
                queue.push_back(next);
            }
        }
    }

    std::vector<int> path;  // edges from the column node towards the row node
    for (int node = goal; node != start; node = parentNode[node])
        path.push_back(parentEdge[node]);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

TransportPlan exact_ot_small(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const CostMatrix& cost)
{
    const Eigen::Index n = a.size();
    const Eigen::Index m = b.size();
    if (n != cost.rows() || m != cost.cols())
        throw InvalidArgument("exact_ot_small: marginal and cost dimensions disagree");
    if (n < 1 || m < 1)
        throw InvalidArgument("exact_ot_small: empty marginals");
    if (n * m > kExactOtMaxCells)
        throw InvalidArgument("exact_ot_small: instance " + std::to_string(n) + "x" +
                              std::to_string(m) + " exceeds the " +
                              std::to_string(kExactOtMaxCells) + "-cell limit");
    if ((a.array() < 0.0).any() || (b.array() < 0.0).any())
        throw InvalidArgument("exact_ot_small: negative weights");
    if (std::abs(a.sum() - b.sum()) > 1e-9 * std::max(1.0, a.sum()))
        throw InvalidArgument("exact_ot_small: marginal masses differ");

    std::vector<Cell> basis = northwestCorner(a, b);

    const double reducedTol = 1e-11 * (1.0 + cost.cwiseAbs().maxCoeff());
    Eigen::VectorXd u, v;

    const int maxPivots = 200 * int(n + m) * int(n * m);
    int pivot = 0;
    for (; pivot < maxPivots; ++pivot) {
        computeDuals(basis, cost, int(n), int(m), u, v);

        // Bland: first cell (row-major) with negative reduced cost enters.
        int enterRow = -1, enterCol = -1;
        std::vector<char> basic(std::size_t(n * m), 0);
        for (const Cell& cell : basis)
            basic[std::size_t(cell.i) * std::size_t(m) + std::size_t(cell.j)] = 1;
        for (Eigen::Index i = 0; i < n && enterRow < 0; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                if (basic[std::size_t(i) * std::size_t(m) + std::size_t(j)])
                    continue;
                if (cost(i, j) - u(i) - v(j) < -reducedTol) {
                    enterRow = int(i);
                    enterCol = int(j);
                    break;
                }
            }
        }
        if (enterRow < 0)
            break;  // optimal

        const std::vector<int> path = cyclePath(basis, int(n), int(m), enterRow, enterCol);

        // Alternating signs along [entering, path...]; even path positions give
        // up flow. Ties broken by smallest row-major index (Bland).
        double theta = std::numeric_limits<double>::infinity();
        int leavingPos = -1;
        long leavingFlat = -1;
        for (int p = 0; p < int(path.size()); p += 2) {
            const Cell& cell = basis[path[std::size_t(p)]];
            const long flat = long(cell.i) * long(m) + long(cell.j);
            if (cell.value < theta ||
                (cell.value == theta && (leavingPos < 0 || flat < leavingFlat))) {
                theta = cell.value;
                leavingPos = p;
                leavingFlat = flat;
            }
        }

        for (int p = 0; p < int(path.size()); ++p) {
            Cell& cell = basis[path[std::size_t(p)]];
            cell.value = (p % 2 == 0) ? std::max(0.0, cell.value - theta)
                                      : cell.value + theta;
        }
        const int leavingIndex = path[std::size_t(leavingPos)];
        basis[std::size_t(leavingIndex)] = {enterRow, enterCol, theta};
    }
    if (pivot >= maxPivots)
        throw SolverError("exact_ot_small: simplex failed to terminate", pivot);

    TransportPlan plan;
    plan.matrix = Eigen::MatrixXd::Zero(n, m);
    for (const Cell& cell : basis)
        plan.matrix(cell.i, cell.j) = cell.value;
    plan.rowMarginal = a;
    plan.colMarginal = b;
    plan.regularization = 0.0;
    return plan;
}

} // namespace stainbary
