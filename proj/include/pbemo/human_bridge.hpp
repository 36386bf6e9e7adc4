#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>

#include "pbemo/dm.hpp"

namespace pbemo::dm {

/// A question waiting for a human answer.
struct PendingQuery {
    std::uint64_t id = 0;
    std::size_t round = 0;
    std::size_t first_cluster = 0;
    std::size_t second_cluster = 0;
    std::size_t index_a = 0;
    std::size_t index_b = 0;
    Solution a;
    Solution b;
};

enum class SubmitStatus { accepted, conflict };

inline constexpr std::chrono::milliseconds default_answer_timeout{std::chrono::minutes(10)};

/// Blocking handshake between the run loop (which asks) and a transport
/// (which answers). Each query is consumed at most once; answers to any
/// other id are conflicts. Timeout and cancellation surface as DmAborted
/// in the asking thread.
class HumanBridge final : public DmOracle {
public:
    using Listener = std::function<void()>;

    explicit HumanBridge(std::chrono::milliseconds timeout = default_answer_timeout);

    Winner answer(const DuelQuery& query) override;
    bool stochastic() const noexcept override { return true; }
    bool interactive() const noexcept override { return true; }

    std::optional<PendingQuery> pending() const;
    SubmitStatus submit(std::uint64_t query_id, Winner winner);

    /// Wakes a blocked `answer` with DmAborted; later questions abort at once.
    void cancel();
    bool cancelled() const;

    /// Invoked (outside the lock) whenever a query is published or retired.
    void set_listener(Listener listener);

    std::uint64_t answered() const;

private:
    void notify();

    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::chrono::milliseconds timeout_;
    std::optional<PendingQuery> pending_;
    std::optional<Winner> reply_;
    std::uint64_t next_id_ = 1;
    std::uint64_t answered_ = 0;
    bool cancelled_ = false;
    Listener listener_;
};

} // namespace pbemo::dm
