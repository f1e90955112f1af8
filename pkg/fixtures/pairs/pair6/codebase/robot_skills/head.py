import rospy
import smach


class MoveHead(smach.State):
    """Point the head at a named target and wait for the motion."""

    def __init__(self, robot, target_name):
        smach.State.__init__(self, outcomes=['head_at_goal', 'cancelled'])
        self.robot = robot
        self.target_name = target_name

    def execute(self, userdata=None):
        goal = self.robot.head.goal_for(self.target_name)
        handle = self.robot.head.send_goal(goal)
        handle.wait()
        if handle.was_cancelled():
            return 'cancelled'
        return 'head_at_goal'
