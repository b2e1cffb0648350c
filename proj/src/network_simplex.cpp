#include "ineqlab/network_simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ineqlab/error.hpp"

namespace ineqlab {
namespace {

constexpr signed char kDirUp = 1;
constexpr signed char kDirDown = -1;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TransportSimplex::TransportSimplex(std::vector<double> supply, std::vector<double> demand, CostFn cost,
                                   double max_cost)
    : m_(supply.size()), k_(demand.size()), cost_(std::move(cost)) {
    require(m_ > 0 && k_ > 0, "transport needs nonempty supports");
    require(max_cost >= 0.0 && max_cost == std::floor(max_cost), "costs must be nonnegative integers");
    nodes_ = m_ + k_;
    arcs_ = m_ * k_;
    supply_.reserve(nodes_);
    for (double s : supply) supply_.push_back(s);
    for (double t : demand) supply_.push_back(-t);
    art_cost_ = (max_cost + 1.0) * static_cast<double>(nodes_);
    require(art_cost_ * static_cast<double>(nodes_) < 0x1p52, "cost range too large for exact potentials");
    block_size_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(arcs_)))));
}

int TransportSimplex::source(std::size_t e) const {
    return e < arcs_ ? static_cast<int>(e / k_) : art_source_[e - arcs_];
}

int TransportSimplex::target(std::size_t e) const {
    return e < arcs_ ? static_cast<int>(m_ + e % k_) : art_target_[e - arcs_];
}

double TransportSimplex::cost(std::size_t e) const {
    return e < arcs_ ? cost_(e / k_, e % k_) : art_cost_v_[e - arcs_];
}

void TransportSimplex::init() {
    const int root = static_cast<int>(nodes_);
    const std::size_t all = nodes_ + 1;
    parent_.assign(all, 0);
    pred_.assign(all, 0);
    thread_.assign(all, 0);
    rev_thread_.assign(all, 0);
    succ_num_.assign(all, 0);
    last_succ_.assign(all, 0);
    pred_dir_.assign(all, 0);
    pred_flow_.assign(all, 0.0);
    pi_.assign(all, 0.0);
    art_source_.assign(nodes_, 0);
    art_target_.assign(nodes_, 0);
    art_cost_v_.assign(nodes_, 0.0);
    state_.assign(arcs_ + nodes_, kLower);

    parent_[root] = -1;
    pred_[root] = static_cast<std::size_t>(-1);
    thread_[root] = 0;
    rev_thread_[0] = root;
    succ_num_[root] = static_cast<int>(nodes_) + 1;
    last_succ_[root] = root - 1;
    pi_[root] = 0.0;

    for (int u = 0; u < root; ++u) {
        const std::size_t e = arcs_ + static_cast<std::size_t>(u);
        parent_[u] = root;
        pred_[u] = e;
        thread_[u] = u + 1;
        rev_thread_[u + 1] = u;
        succ_num_[u] = 1;
        last_succ_[u] = u;
        state_[e] = kTree;
        if (supply_[u] >= 0.0) {
            pred_dir_[u] = kDirUp;
            pi_[u] = 0.0;
            art_source_[u] = u;
            art_target_[u] = root;
            pred_flow_[u] = supply_[u];
            art_cost_v_[u] = 0.0;
        } else {
            pred_dir_[u] = kDirDown;
            pi_[u] = art_cost_;
            art_source_[u] = root;
            art_target_[u] = u;
            pred_flow_[u] = -supply_[u];
            art_cost_v_[u] = art_cost_;
        }
    }
}

bool TransportSimplex::find_entering_arc() {
    double min = 0.0;
    std::size_t cnt = block_size_;
    std::size_t e;
    for (e = next_arc_; e < arcs_; ++e) {
        const double c = state_[e] * (cost(e) + pi_[source(e)] - pi_[target(e)]);
        if (c < min) {
            min = c;
            in_arc_ = e;
        }
        if (--cnt == 0) {
            if (min < 0.0) goto search_end;
            cnt = block_size_;
        }
    }
    for (e = 0; e < next_arc_; ++e) {
        const double c = state_[e] * (cost(e) + pi_[source(e)] - pi_[target(e)]);
        if (c < min) {
            min = c;
            in_arc_ = e;
        }
        if (--cnt == 0) {
            if (min < 0.0) goto search_end;
            cnt = block_size_;
        }
    }
    if (min >= 0.0) return false;
search_end:
    next_arc_ = e;
    return true;
}

void TransportSimplex::find_join_node() {
    int u = source(in_arc_), v = target(in_arc_);
    while (u != v) {
        if (succ_num_[u] < succ_num_[v])
            u = parent_[u];
        else
            v = parent_[v];
    }
    join_ = u;
}

bool TransportSimplex::find_leaving_arc() {
    int first, second;
    if (state_[in_arc_] == kLower) {
        first = source(in_arc_);
        second = target(in_arc_);
    } else {
        first = target(in_arc_);
        second = source(in_arc_);
    }
    delta_ = kInf;
    int result = 0;
    for (int u = first; u != join_; u = parent_[u]) {
        const double d = pred_dir_[u] == kDirUp ? pred_flow_[u] : kInf;
        if (d < delta_) {
            delta_ = d;
            u_out_ = u;
            result = 1;
        }
    }
    for (int u = second; u != join_; u = parent_[u]) {
        const double d = pred_dir_[u] == kDirDown ? pred_flow_[u] : kInf;
        if (d <= delta_) {
            delta_ = d;
            u_out_ = u;
            result = 2;
        }
    }
    if (result == 1) {
        u_in_ = first;
        v_in_ = second;
    } else {
        u_in_ = second;
        v_in_ = first;
    }
    return result != 0;
}

void TransportSimplex::change_flow() {
    const double val = state_[in_arc_] * delta_;
    in_flow_ = val;
    if (delta_ > 0.0) {
        for (int u = source(in_arc_); u != join_; u = parent_[u]) pred_flow_[u] -= pred_dir_[u] * val;
        for (int u = target(in_arc_); u != join_; u = parent_[u]) pred_flow_[u] += pred_dir_[u] * val;
    }
    state_[in_arc_] = kTree;
    state_[pred_[u_out_]] = kLower;
    pred_flow_[u_out_] = 0.0;
}

void TransportSimplex::update_tree_structure() {
    const int old_rev_thread = rev_thread_[u_out_];
    const int old_succ_num = succ_num_[u_out_];
    const int old_last_succ = last_succ_[u_out_];
    v_out_ = parent_[u_out_];
    const signed char in_dir = u_in_ == source(in_arc_) ? kDirUp : kDirDown;

    if (u_in_ == u_out_) {
        parent_[u_in_] = v_in_;
        pred_[u_in_] = in_arc_;
        pred_dir_[u_in_] = in_dir;
        pred_flow_[u_in_] = in_flow_;
        if (thread_[v_in_] != u_out_) {
            int after = thread_[old_last_succ];
            thread_[old_rev_thread] = after;
            rev_thread_[after] = old_rev_thread;
            after = thread_[v_in_];
            thread_[v_in_] = u_out_;
            rev_thread_[u_out_] = v_in_;
            thread_[old_last_succ] = after;
            rev_thread_[after] = old_last_succ;
        }
    } else {
        const int thread_continue = old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

        int stem = u_in_;
        int par_stem = v_in_;
        int next_stem;
        int last = last_succ_[u_in_];
        int before, after = thread_[last];
        thread_[v_in_] = u_in_;
        dirty_revs_.clear();
        dirty_revs_.push_back(v_in_);
        while (stem != u_out_) {
            next_stem = parent_[stem];
            thread_[last] = next_stem;
            dirty_revs_.push_back(last);

            before = rev_thread_[stem];
            thread_[before] = after;
            rev_thread_[after] = before;

            parent_[stem] = par_stem;
            par_stem = stem;
            stem = next_stem;

            last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
            after = thread_[last];
        }
        parent_[u_out_] = par_stem;
        thread_[last] = thread_continue;
        rev_thread_[thread_continue] = last;
        last_succ_[u_out_] = last;

        if (old_rev_thread != v_in_) {
            thread_[old_rev_thread] = after;
            rev_thread_[after] = old_rev_thread;
        }

        for (int u : dirty_revs_) rev_thread_[thread_[u]] = u;

        int tmp_sc = 0;
        const int tmp_ls = last_succ_[u_out_];
        for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
            pred_[u] = pred_[p];
            pred_dir_[u] = static_cast<signed char>(-pred_dir_[p]);
            pred_flow_[u] = pred_flow_[p];
            tmp_sc += succ_num_[u] - succ_num_[p];
            succ_num_[u] = tmp_sc;
            last_succ_[p] = tmp_ls;
        }
        pred_[u_in_] = in_arc_;
        pred_dir_[u_in_] = in_dir;
        pred_flow_[u_in_] = in_flow_;
        succ_num_[u_in_] = old_succ_num;
    }

    const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
    const int last_succ_out = last_succ_[u_out_];
    for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) last_succ_[u] = last_succ_out;

    if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
        for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u])
            last_succ_[u] = old_rev_thread;
    } else if (last_succ_out != old_last_succ) {
        for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u])
            last_succ_[u] = last_succ_out;
    }

    for (int u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
    for (int u = v_out_; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
}

void TransportSimplex::update_potential() {
    const double c = cost(in_arc_);
    const double sigma = pi_[v_in_] - pi_[u_in_] - (pred_dir_[u_in_] == kDirUp ? c : -c);
    const int end = thread_[last_succ_[u_in_]];
    for (int u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
}

void TransportSimplex::solve() {
    init();
    while (find_entering_arc()) {
        find_join_node();
        if (!find_leaving_arc()) throw std::logic_error("transport simplex: unbounded pivot");
        change_flow();
        update_tree_structure();
        update_potential();
        ++pivots_;
    }
    phi_.assign(m_, 0.0);
    psi_.assign(k_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) phi_[i] = -pi_[i];
    for (std::size_t j = 0; j < k_; ++j) psi_[j] = pi_[m_ + j];
    // pin phi_0 = 0; integer shifts keep everything exact
    const double shift = phi_[0];
    for (double& p : phi_) p -= shift;
    for (double& p : psi_) p += shift;
}

std::vector<TransportSimplex::Arc> TransportSimplex::flows() const {
    std::vector<Arc> out;
    for (std::size_t u = 0; u < nodes_; ++u) {
        const std::size_t e = pred_[u];
        if (e >= arcs_ || pred_flow_[u] <= 0.0) continue;
        out.push_back({e / k_, e % k_, pred_flow_[u]});
    }
    return out;
}

}  // namespace ineqlab
