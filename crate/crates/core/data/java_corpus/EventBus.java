package events;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;
import java.util.function.Consumer;

public class EventBus {
    private final Map<Class<?>, List<Consumer<Object>>> handlers = new HashMap<>();

    public <T> void subscribe(Class<T> type, Consumer<? super T> handler) {
        handlers.computeIfAbsent(type, k -> new ArrayList<>())
                .add(o -> handler.accept(type.cast(o))); // unchecked-free cast
    }

    public void publish(Object event) {
        /*
         * Exact type match only; no hierarchy walk.
         */
        List<Consumer<Object>> list = handlers.get(event.getClass());
        if (list == null) return;
        list.forEach(h -> h.accept(event));
    }

    /** Listener registered through an anonymous class. */
    public void logAll() {
        subscribe(Object.class, new Consumer<Object>() {
            @Override
            public void accept(Object o) {
                System.out.println("event: " + o); // debug output
            }
        });
    }
}
