#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>

namespace fairsplit {

/// Multi-producer/multi-consumer queue whose consumers may push follow-up
/// work. pop() returns nullopt once the queue is empty and no popped item is
/// still being processed.
template <class T>
class WorkQueue {
public:
    void push(T item) {
        {
            std::lock_guard lock(mu_);
            items_.push_back(std::move(item));
        }
        cv_.notify_one();
    }

    std::optional<T> pop() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return !items_.empty() || in_flight_ == 0; });
        if (items_.empty()) return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        ++in_flight_;
        return item;
    }

    // Marks one popped item as finished; call after pushing its children.
    void done() {
        {
            std::lock_guard lock(mu_);
            --in_flight_;
        }
        cv_.notify_all();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<T> items_;
    std::size_t in_flight_ = 0;
};

}  // namespace fairsplit
