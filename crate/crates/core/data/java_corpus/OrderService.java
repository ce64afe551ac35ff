package shop;

import java.util.List;
import java.util.Optional;

/**
 * Places and looks up orders.
 */
public class OrderService {
    private final OrderRepository repo;

    public OrderService(OrderRepository repo) {
        this.repo = repo;
    }

    /**
     * Places an order.
     * @throws IllegalStateException if the cart is empty
     */
    @Deprecated(since = "2.0")
    public long place(List<String> items) {
        if (items.isEmpty()) {
            throw new IllegalStateException("empty cart");
        }
        return repo.save(new Order(items)); // returns id
    }

    public Optional<Order> find(long id) {
        return Optional.ofNullable(repo.load(id));
    }

    interface OrderRepository {
        long save(Order o);
        Order load(long id);
    }

    static final class Order {
        final List<String> items;
        Order(List<String> items) { this.items = List.copyOf(items); }
    }
}
