package ast;

/** Expression tree with a visitor. */
public abstract class Visitor<R> {
    public abstract R visitNum(Num n);
    public abstract R visitAdd(Add a);

    public static abstract class Expr {
        public abstract <R> R accept(Visitor<R> v);
    }

    public static final class Num extends Expr {
        final int value;
        public Num(int value) { this.value = value; }
        @Override public <R> R accept(Visitor<R> v) { return v.visitNum(this); }
    }

    public static final class Add extends Expr {
        final Expr l, r;
        public Add(Expr l, Expr r) { this.l = l; this.r = r; }
        @Override public <R> R accept(Visitor<R> v) { return v.visitAdd(this); }
    }

    /** Evaluates an expression. */
    public static final Visitor<Integer> EVAL = new Visitor<>() {
        @Override public Integer visitNum(Num n) { return n.value; }
        @Override public Integer visitAdd(Add a) { return a.l.accept(this) + a.r.accept(this); }
    };
}
