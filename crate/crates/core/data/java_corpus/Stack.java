package ds;

import java.util.Arrays;
import java.util.EmptyStackException;

/**
 * Array-backed stack.
 */
public class Stack<T> {
    private Object[] items = new Object[8];
    private int size;

    public void push(T item) {
        if (size == items.length) {
            items = Arrays.copyOf(items, size * 2); // grow
        }
        items[size++] = item;
    }

    @SuppressWarnings("unchecked")
    public T pop() {
        if (size == 0) throw new EmptyStackException();
        T t = (T) items[--size];
        items[size] = null; // let GC reclaim
        return t;
    }

    public boolean isEmpty() { return size == 0; }
}
