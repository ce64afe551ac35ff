package ds;

/** Singly linked list node. */
class Node<T> {
    T value;
    Node<T> next;

    Node(T value, Node<T> next) {
        this.value = value;
        this.next = next;
    }

    static <T> Node<T> reverse(Node<T> head) {
        Node<T> prev = null;
        while (head != null) {
            Node<T> n = head.next; // remember successor
            head.next = prev;
            prev = head;
            head = n;
        }
        return prev;
    }

    static int length(Node<?> head) {
        int n = 0;
        for (Node<?> p = head; p != null; p = p.next) n++;
        return n;
    }
}
