#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ineqlab {

// Primal network simplex for the uncapacitated transportation problem on the
// complete bipartite graph (sources 0..m-1, sinks 0..k-1). Costs are integers
// held in doubles, so potentials and reduced costs are exact; only the flows
// carry rounding. Tree bookkeeping follows the thread/successor layout of the
// LEMON implementation.
class TransportSimplex {
public:
    using CostFn = std::function<double(std::size_t src, std::size_t dst)>;

    struct Arc {
        std::size_t src, dst;
        double flow;
    };

    TransportSimplex(std::vector<double> supply, std::vector<double> demand, CostFn cost, double max_cost);

    void solve();

    // Basic arcs with positive flow.
    std::vector<Arc> flows() const;
    // Dual potentials with phi_i + psi_j <= c_ij for every arc (exact).
    const std::vector<double>& phi() const { return phi_; }
    const std::vector<double>& psi() const { return psi_; }
    std::uint64_t pivots() const { return pivots_; }

private:
    enum : signed char { kUpper = -1, kTree = 0, kLower = 1 };

    std::size_t m_, k_, nodes_, arcs_;
    std::vector<double> supply_;
    CostFn cost_;
    double art_cost_;

    // artificial arcs live at ids arcs_ .. arcs_ + nodes_ - 1
    std::vector<int> art_source_, art_target_;
    std::vector<double> art_cost_v_;
    std::vector<signed char> state_;

    std::vector<std::size_t> pred_;
    std::vector<int> parent_, thread_, rev_thread_, succ_num_, last_succ_, dirty_revs_;
    std::vector<signed char> pred_dir_;
    std::vector<double> pred_flow_, pi_;

    std::size_t block_size_, next_arc_ = 0;
    std::size_t in_arc_ = 0;
    int join_ = 0, u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
    double delta_ = 0.0, in_flow_ = 0.0;
    std::uint64_t pivots_ = 0;

    std::vector<double> phi_, psi_;

    int source(std::size_t e) const;
    int target(std::size_t e) const;
    double cost(std::size_t e) const;

    void init();
    bool find_entering_arc();
    void find_join_node();
    bool find_leaving_arc();
    void change_flow();
    void update_tree_structure();
    void update_potential();
};

}  // namespace ineqlab
